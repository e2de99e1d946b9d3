//! Transfer matrix, discriminant, band edges and Bloch functions.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Result, SusyError};
use crate::model::{BoundaryTag, PotentialModel, SeedSolution};
use crate::numerics::grid::Grid1D;
use crate::numerics::interp::QuinticTable;
use crate::scalar::{csqrt, cx, Cx, Real};

/// RK4 steps per period.
pub const DEFAULT_STEPS_PER_PERIOD: usize = 4000;
/// Largest admissible drift of `det b(x)` from 1.
pub const DETERMINANT_TOLERANCE: f64 = 1e-6;
/// `||D| - 2|` below which an energy counts as a band edge.
pub const EDGE_TOLERANCE: f64 = 1e-8;

/// `b(x) = [[v1, v2], [v1', v2']]` for the solutions with `v1(0) = 1, v1'(0) = 0`
/// and `v2(0) = 0, v2'(0) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix<T> {
    pub entries: [[T; 2]; 2],
    pub x: T,
    pub energy: T,
}

impl<T: Real> TransferMatrix<T> {
    pub fn det(&self) -> T {
        let [[a, b], [c, d]] = self.entries;
        a * d - b * c
    }

    pub fn trace(&self) -> T {
        self.entries[0][0] + self.entries[1][1]
    }
}

fn period_of<T: Real>(model: &PotentialModel<T>) -> Result<T> {
    model.period().ok_or_else(|| {
        SusyError::InvalidInput(format!("potential '{}' is not periodic", model.label))
    })
}

/// Advances both fundamental solutions by one RK4 step.
#[inline]
fn step<T: Real>(m: &mut [[T; 2]; 2], e: T, h: T, v0: T, vm: T, v1: T) {
    let two = T::lit(2.0);
    let half = h / two;
    let sixth = h / T::lit(6.0);
    for col in 0..2 {
        let (u, du) = (m[0][col], m[1][col]);
        let k1u = du;
        let k1p = two * (v0 - e) * u;
        let k2u = du + half * k1p;
        let k2p = two * (vm - e) * (u + half * k1u);
        let k3u = du + half * k2p;
        let k3p = two * (vm - e) * (u + half * k2u);
        let k4u = du + h * k3p;
        let k4p = two * (v1 - e) * (u + h * k3u);
        m[0][col] = u + sixth * (k1u + two * k2u + two * k3u + k4u);
        m[1][col] = du + sixth * (k1p + two * k2p + two * k3p + k4p);
    }
}

fn check_det<T: Real>(b: &TransferMatrix<T>) -> Result<()> {
    let drift = (b.det() - T::one()).abs();
    if !(drift <= T::lit(DETERMINANT_TOLERANCE)) {
        return Err(SusyError::IntegratorAccuracy(format!(
            "det b({}) = 1 {:+e} at E = {}",
            b.x,
            (b.det() - T::one()).to_f64_lossy(),
            b.energy
        )));
    }
    Ok(())
}

/// Transfer matrix `b(x)` of a periodic potential at energy `e`, integrated
/// from 0 with [`DEFAULT_STEPS_PER_PERIOD`] steps per period.
pub fn transfer_matrix<T: Real>(
    model: &PotentialModel<T>,
    e: T,
    x: T,
) -> Result<TransferMatrix<T>> {
    let period = period_of(model)?;
    let mut m = [[T::one(), T::zero()], [T::zero(), T::one()]];
    if x != T::zero() {
        let per = T::from_usize_lossy(DEFAULT_STEPS_PER_PERIOD);
        let n = ((x.abs() / period * per).ceil().to_f64_lossy() as usize).max(16);
        let h = x / T::from_usize_lossy(n);
        let half = h / T::lit(2.0);
        for k in 0..n {
            let x0 = h * T::from_usize_lossy(k);
            let v = |t: T| model.value(t).0;
            step(&mut m, e, h, v(x0), v(x0 + half), v(x0 + h));
        }
    }
    let b = TransferMatrix {
        entries: m,
        x,
        energy: e,
    };
    check_det(&b)?;
    Ok(b)
}

/// Where an energy sits relative to the band structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Band,
    Edge,
    Gap,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Band => "band",
            Regime::Edge => "edge",
            Regime::Gap => "gap",
        })
    }
}

/// Floquet multipliers `β±` with `β₊ + β₋ = D`, `β₊ β₋ = 1`. In a gap
/// `|β₊| > 1`; in a band `β± = e^{±ikT}` with `k ∈ [0, π/T]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloquetData<T> {
    pub energy: T,
    pub discriminant: T,
    pub beta_plus: Cx<T>,
    pub beta_minus: Cx<T>,
    pub quasimomentum: Option<T>,
    pub regime: Regime,
}

impl<T: Real> FloquetData<T> {
    fn new(energy: T, d: T, period: T) -> Self {
        let two = T::lit(2.0);
        let excess = d.abs() - two;
        let regime = if excess.abs() <= T::lit(EDGE_TOLERANCE) {
            Regime::Edge
        } else if excess < T::zero() {
            Regime::Band
        } else {
            Regime::Gap
        };
        let root = csqrt(cx(d * d - T::lit(4.0)));
        let (mut bp, mut bm) = ((cx(d) + root) / two, (cx(d) - root) / two);
        if bm.norm() > bp.norm() {
            std::mem::swap(&mut bp, &mut bm);
        }
        if regime != Regime::Gap {
            // |β| = 1 up to rounding; keep β₊ in the upper half plane
            if bp.im < T::zero() {
                std::mem::swap(&mut bp, &mut bm);
            }
        }
        let quasimomentum =
            (regime != Regime::Gap).then(|| (d / two).max(-T::one()).min(T::one()).acos() / period);
        Self {
            energy,
            discriminant: d,
            beta_plus: bp,
            beta_minus: bm,
            quasimomentum,
            regime,
        }
    }
}

/// One period of a potential tabulated for repeated monodromy evaluations.
pub struct Floquet<T> {
    period: T,
    steps: usize,
    /// `V(k h / 2)`, `k = 0..=2 steps`.
    table: Vec<T>,
}

impl<T: Real> Floquet<T> {
    pub fn new(model: &PotentialModel<T>) -> Result<Self> {
        Self::with_steps(model, DEFAULT_STEPS_PER_PERIOD)
    }

    pub fn with_steps(model: &PotentialModel<T>, steps: usize) -> Result<Self> {
        let period = period_of(model)?;
        let steps = steps.max(16);
        let half = period / T::from_usize_lossy(2 * steps);
        let table = (0..=2 * steps)
            .map(|k| model.value(half * T::from_usize_lossy(k)).0)
            .collect();
        Ok(Self {
            period,
            steps,
            table,
        })
    }

    pub fn period(&self) -> T {
        self.period
    }

    /// `b(T)`.
    pub fn monodromy(&self, e: T) -> Result<TransferMatrix<T>> {
        let mut m = [[T::one(), T::zero()], [T::zero(), T::one()]];
        let h = self.period / T::from_usize_lossy(self.steps);
        for k in 0..self.steps {
            step(
                &mut m,
                e,
                h,
                self.table[2 * k],
                self.table[2 * k + 1],
                self.table[2 * k + 2],
            );
        }
        let b = TransferMatrix {
            entries: m,
            x: self.period,
            energy: e,
        };
        check_det(&b)?;
        Ok(b)
    }

    /// `D(E) = tr b(T)`.
    pub fn discriminant(&self, e: T) -> Result<T> {
        Ok(self.monodromy(e)?.trace())
    }

    /// `D` at every energy, evaluated in parallel in no particular order.
    pub fn discriminant_batch(&self, energies: &[T]) -> Result<Vec<T>> {
        energies.par_iter().map(|&e| self.discriminant(e)).collect()
    }

    pub fn data(&self, e: T) -> Result<FloquetData<T>> {
        Ok(FloquetData::new(e, self.discriminant(e)?, self.period))
    }
}

/// `D(E)` of a periodic potential.
pub fn discriminant<T: Real>(model: &PotentialModel<T>, e: T) -> Result<T> {
    Floquet::new(model)?.discriminant(e)
}

/// `D` on a set of energies (parallel).
pub fn discriminant_batch<T: Real>(model: &PotentialModel<T>, energies: &[T]) -> Result<Vec<T>> {
    Floquet::new(model)?.discriminant_batch(energies)
}

pub fn floquet_data<T: Real>(model: &PotentialModel<T>, e: T) -> Result<FloquetData<T>> {
    Floquet::new(model)?.data(e)
}

/// Boundary condition satisfied by the band-edge solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Periodicity {
    /// `D = 2`, `u(x + T) = u(x)`.
    Periodic,
    /// `D = -2`, `u(x + T) = -u(x)`.
    Antiperiodic,
}

impl fmt::Display for Periodicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Periodicity::Periodic => "periodic",
            Periodicity::Antiperiodic => "antiperiodic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandEdge<T> {
    pub energy: T,
    pub periodicity: Periodicity,
    /// `D` touches `±2` without crossing: a closed gap, reported as two
    /// coincident edges.
    pub double_root: bool,
}

/// Edges, bands and gaps inside a scanned energy range. Bands and gaps
/// partition the range; a closed gap appears as a zero-width gap.
#[derive(Debug, Clone, PartialEq)]
pub struct BandStructure<T> {
    pub range: (T, T),
    pub edges: Vec<BandEdge<T>>,
    pub bands: Vec<(T, T)>,
    pub gaps: Vec<(T, T)>,
}

impl<T: Real> BandStructure<T> {
    pub fn edge_energies(&self) -> Vec<T> {
        self.edges.iter().map(|e| e.energy).collect()
    }

    /// Whether the band containing the upper end of the range is open.
    pub fn top_band_open(&self) -> bool {
        self.bands.last().is_some_and(|b| b.1 == self.range.1)
    }
}

fn bisect<T: Real, F: Fn(T) -> Result<T>>(f: &F, mut a: T, mut b: T, mut fa: T) -> Result<T> {
    for _ in 0..200 {
        let tol = T::lit(1e-12) * (T::one() + a.abs().max(b.abs()));
        if b - a <= tol {
            break;
        }
        let mid = (a + b) / T::lit(2.0);
        let fm = f(mid)?;
        if fm == T::zero() {
            return Ok(mid);
        }
        if (fm > T::zero()) == (fa > T::zero()) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok((a + b) / T::lit(2.0))
}

/// Extremum of `f` on `[a, b]` by golden-section search; `sign = 1` for a
/// maximum, `-1` for a minimum.
fn golden_extremum<T: Real, F: Fn(T) -> Result<T>>(
    f: &F,
    mut a: T,
    mut b: T,
    sign: T,
) -> Result<(T, T)> {
    let r = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (sign * f(x1)?, sign * f(x2)?);
    for _ in 0..200 {
        if b - a <= T::lit(1e-13) * (T::one() + a.abs()) {
            break;
        }
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = sign * f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = sign * f(x2)?;
        }
    }
    let x = (a + b) / T::lit(2.0);
    Ok((x, f(x)?))
}

/// Band edges in `[e_min, e_max]`: sign changes of `D ∓ 2` on a uniform scan
/// of `scan_points` energies, refined by bisection. Tangencies of `D` with
/// `±2` between scan points are located by golden-section search.
pub fn band_edges<T: Real>(
    model: &PotentialModel<T>,
    range: (T, T),
    scan_points: usize,
) -> Result<BandStructure<T>> {
    let (e_min, e_max) = range;
    if !(e_min < e_max) || scan_points < 3 {
        return Err(SusyError::InvalidInput(format!(
            "band scan needs e_min < e_max and ≥ 3 points (got [{e_min}, {e_max}], {scan_points})"
        )));
    }
    let fl = Floquet::new(model)?;
    let de = (e_max - e_min) / T::from_usize_lossy(scan_points - 1);
    let energies: Vec<T> = (0..scan_points)
        .map(|i| e_min + de * T::from_usize_lossy(i))
        .collect();
    let d = fl.discriminant_batch(&energies)?;
    let dfun = |e: T| fl.discriminant(e);
    let two = T::lit(2.0);
    let exact = T::lit(1e-12);
    let mut edges: Vec<BandEdge<T>> = Vec::new();
    let push = |edges: &mut Vec<BandEdge<T>>, energy: T, target: T, double_root: bool| {
        let periodicity = if target > T::zero() {
            Periodicity::Periodic
        } else {
            Periodicity::Antiperiodic
        };
        edges.push(BandEdge {
            energy,
            periodicity,
            double_root,
        });
    };
    for target in [two, -two] {
        let f = |e: T| Ok(dfun(e)? - target);
        let g: Vec<T> = d.iter().map(|&x| x - target).collect();
        let hit: Vec<bool> = g.iter().map(|x| x.abs() <= exact).collect();
        let mut crossed = hit.clone();
        for i in 0..scan_points {
            if hit[i] {
                push(&mut edges, energies[i], target, false);
            }
        }
        for i in 0..scan_points - 1 {
            if hit[i] || hit[i + 1] {
                continue;
            }
            if (g[i] > T::zero()) != (g[i + 1] > T::zero()) {
                let e = bisect(&f, energies[i], energies[i + 1], g[i])?;
                push(&mut edges, e, target, false);
                crossed[i] = true;
                crossed[i + 1] = true;
            }
        }
        // tangencies: D turns back before reaching the target
        let sign = if target > T::zero() {
            T::one()
        } else {
            -T::one()
        };
        for i in 1..scan_points - 1 {
            if crossed[i - 1] || crossed[i] || crossed[i + 1] {
                continue;
            }
            let is_peak =
                sign * (d[i] - d[i - 1]) >= T::zero() && sign * (d[i + 1] - d[i]) <= T::zero();
            if !is_peak || sign * g[i] >= T::zero() || sign * g[i] < -T::lit(0.5) {
                continue;
            }
            let (e_star, d_star) = golden_extremum(&dfun, energies[i - 1], energies[i + 1], sign)?;
            let excess = sign * (d_star - target);
            if excess.abs() <= T::lit(EDGE_TOLERANCE) {
                push(&mut edges, e_star, target, true);
                push(&mut edges, e_star, target, true);
            } else if excess > T::zero() {
                let lo = bisect(&f, energies[i - 1], e_star, g[i - 1])?;
                let hi = bisect(&f, e_star, energies[i + 1], d_star - target)?;
                push(&mut edges, lo, target, false);
                push(&mut edges, hi, target, false);
            }
        }
    }
    edges.sort_by(|a, b| a.energy.partial_cmp(&b.energy).expect("finite band edges"));

    let mut bands = Vec::new();
    let mut gaps = Vec::new();
    let mut points = vec![e_min];
    points.extend(edges.iter().map(|e| e.energy));
    points.push(e_max);
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            if a > e_min && a < e_max {
                gaps.push((a, a));
            }
            continue;
        }
        let mid = (a + b) / two;
        if fl.discriminant(mid)?.abs() <= two {
            bands.push((a, b));
        } else {
            gaps.push((a, b));
        }
    }
    Ok(BandStructure {
        range,
        edges,
        bands,
        gaps,
    })
}

/// Floquet eigenvector `(c1, c2)` of `b(T)` for multiplier `beta`.
fn eigenvector<T: Real>(b: &TransferMatrix<T>, beta: Cx<T>) -> (Cx<T>, Cx<T>) {
    let [[a, b12], [c21, d]] = b.entries;
    let v1 = (cx(b12), beta - cx(a));
    let v2 = (beta - cx(d), cx(c21));
    let n1 = v1.0.norm() + v1.1.norm();
    let n2 = v2.0.norm() + v2.1.norm();
    let scale = T::one() + a.abs() + d.abs();
    if n1.max(n2) <= T::lit(1e-10) * scale {
        // b(T) = ±1: every solution is (anti)periodic
        return (cx(T::one()), cx(T::zero()));
    }
    if n1 >= n2 {
        v1
    } else {
        v2
    }
}

/// Fundamental solutions tabulated on one period.
struct Cell<T> {
    grid: Grid1D<T>,
    /// `[v1, v1', v2, v2']` at the nodes.
    cols: [Vec<T>; 4],
    v: Vec<T>,
}

impl<T: Real> Cell<T> {
    fn new(model: &PotentialModel<T>, e: T, period: T, steps: usize) -> Result<Self> {
        let grid = Grid1D::new(T::zero(), period, steps + 1)?;
        let h = grid.spacing();
        let half = h / T::lit(2.0);
        let mut m = [[T::one(), T::zero()], [T::zero(), T::one()]];
        let mut cols: [Vec<T>; 4] = Default::default();
        let mut v = Vec::with_capacity(steps + 1);
        let record = |m: &[[T; 2]; 2], cols: &mut [Vec<T>; 4]| {
            cols[0].push(m[0][0]);
            cols[1].push(m[1][0]);
            cols[2].push(m[0][1]);
            cols[3].push(m[1][1]);
        };
        record(&m, &mut cols);
        v.push(model.value(T::zero()).0);
        for k in 0..steps {
            let x0 = grid.x(k);
            let v1 = model.value(x0 + h).0;
            step(
                &mut m,
                e,
                h,
                model.value(x0).0,
                model.value(x0 + half).0,
                v1,
            );
            record(&m, &mut cols);
            v.push(v1);
        }
        let b = TransferMatrix {
            entries: m,
            x: period,
            energy: e,
        };
        check_det(&b)?;
        Ok(Self { grid, cols, v })
    }

    fn monodromy(&self, e: T) -> TransferMatrix<T> {
        let n = self.grid.len() - 1;
        TransferMatrix {
            entries: [
                [self.cols[0][n], self.cols[2][n]],
                [self.cols[1][n], self.cols[3][n]],
            ],
            x: self.grid.x_max(),
            energy: e,
        }
    }

    /// Solution `c1 v1 + c2 v2` continued beyond the cell with `u(x + T) = β u(x)`.
    fn bloch(
        &self,
        e: T,
        c: (Cx<T>, Cx<T>),
        beta: Cx<T>,
    ) -> impl Fn(T) -> (Cx<T>, Cx<T>) + Send + Sync + 'static {
        let n = self.grid.len();
        let mut f = Vec::with_capacity(n);
        let mut d = Vec::with_capacity(n);
        let mut s = Vec::with_capacity(n);
        for i in 0..n {
            let u = c.0 * self.cols[0][i] + c.1 * self.cols[2][i];
            let du = c.0 * self.cols[1][i] + c.1 * self.cols[3][i];
            f.push(u);
            d.push(du);
            s.push(u * (T::lit(2.0) * (self.v[i] - e)));
        }
        let table = QuinticTable::new(self.grid, f, d, s);
        let period = self.grid.x_max();
        move |x: T| {
            let k = (x / period).floor();
            let t = x - k * period;
            let (u, du) = table.eval(t);
            let ki = k.to_f64_lossy() as i32;
            let factor = beta.powi(ki);
            (u * factor, du * factor)
        }
    }
}

/// The two Bloch solutions `u±(x + T) = β± u±(x)` sampled on the model grid.
#[derive(Debug, Clone)]
pub struct BlochFunctions<T: Real> {
    pub plus: SeedSolution<T>,
    pub minus: SeedSolution<T>,
    pub floquet: FloquetData<T>,
    pub warnings: Vec<String>,
}

/// Bloch functions at energy `e`, normalized to `u(0) = 1` (or `u'(0) = 1`
/// when `u(0) = 0`). At a band edge the single (anti)periodic solution is
/// returned twice with a warning.
pub fn bloch_functions<T: Real>(model: &PotentialModel<T>, e: T) -> Result<BlochFunctions<T>> {
    let period = period_of(model)?;
    let cell = Arc::new(Cell::new(model, e, period, DEFAULT_STEPS_PER_PERIOD)?);
    let b = cell.monodromy(e);
    let floquet = FloquetData::new(e, b.trace(), period);
    let mut warnings = Vec::new();
    let grid = *model.grid();
    let make = |beta: Cx<T>, tags: (BoundaryTag, BoundaryTag), name: &str| {
        let (mut c1, mut c2) = eigenvector(&b, beta);
        let lead = if c1.norm() > T::lit(1e-12) * (c1.norm() + c2.norm()) {
            c1
        } else {
            c2
        };
        c1 /= lead;
        c2 /= lead;
        let eval = cell.bloch(e, (c1, c2), beta);
        let mut seed = SeedSolution::from_evaluator(
            cx(e),
            grid,
            tags,
            format!("Bloch function {name} at E = {e}"),
            eval,
        );
        if floquet.regime != Regime::Band {
            seed.u = seed.u.into_real();
        }
        seed
    };
    let (plus, minus) = match floquet.regime {
        Regime::Gap => {
            let plus = make(
                floquet.beta_plus,
                (BoundaryTag::Vanishes, BoundaryTag::Diverges),
                "u+",
            );
            let minus = make(
                floquet.beta_minus,
                (BoundaryTag::Diverges, BoundaryTag::Vanishes),
                "u-",
            );
            (plus, minus)
        }
        Regime::Band => {
            let bounded = (BoundaryTag::BoundedNonzero, BoundaryTag::BoundedNonzero);
            (
                make(floquet.beta_plus, bounded, "u+"),
                make(floquet.beta_minus, bounded, "u-"),
            )
        }
        Regime::Edge => {
            warnings.push(format!(
                "E = {e} is a band edge (D = {}); the Floquet multiplier is degenerate",
                floquet.discriminant
            ));
            let beta = cx(if floquet.discriminant > T::zero() {
                T::one()
            } else {
                -T::one()
            });
            let u = make(
                beta,
                (BoundaryTag::BoundedNonzero, BoundaryTag::BoundedNonzero),
                "u",
            );
            (u.clone(), u)
        }
    };
    Ok(BlochFunctions {
        plus,
        minus,
        floquet,
        warnings,
    })
}
