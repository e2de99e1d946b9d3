//! Potentials, seed solutions and their pointwise evaluators.
//!
//! Every potential and seed carries, next to its grid samples, a closure that
//! evaluates it at arbitrary `x`. Transformed potentials are built from these
//! closures, so a partner can itself be integrated, shot or transformed again
//! with the accuracy of the underlying analytic or interpolated data.

use std::fmt;
use std::sync::Arc;

use crate::error::{Result, SusyError};
use crate::numerics::calculus::{
    count_nodes, default_margin, derivative_6th, interior_sup, RESIDUAL_SKIP,
};
use crate::numerics::grid::{Grid1D, SampledFunction};
use crate::numerics::interp::QuinticTable;
use crate::numerics::ode::{integrate_with, DEFAULT_OVERFLOW_CAP};
use crate::scalar::{cx, Cx, Real};

/// `x -> (V(x), V'(x))`.
pub type PotentialFn<T> = Arc<dyn Fn(T) -> (T, T) + Send + Sync>;
/// `x -> (u(x), u'(x))`.
pub type SeedFn<T> = Arc<dyn Fn(T) -> (Cx<T>, Cx<T>) + Send + Sync>;
/// `n -> E(n)`.
pub type SpectrumFn<T> = Arc<dyn Fn(usize) -> T + Send + Sync>;

/// Where the Hamiltonian lives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainKind<T> {
    /// Open interval `(left, right)`. The potential may diverge at the ends.
    FiniteInterval {
        left: T,
        right: T,
    },
    WholeLine,
    Periodic {
        period: T,
    },
}

/// A real potential sampled on a grid, with a pointwise evaluator.
#[derive(Clone)]
pub struct PotentialModel<T> {
    pub v: SampledFunction<T>,
    pub domain: DomainKind<T>,
    pub label: String,
    spectrum: Option<SpectrumFn<T>>,
    eval: PotentialFn<T>,
}

impl<T: Real> fmt::Debug for PotentialModel<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PotentialModel")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("grid", &self.v.grid)
            .field("analytic_spectrum", &self.spectrum.is_some())
            .finish()
    }
}

fn tolerance_for<T: Real>(scale: T) -> T {
    T::lit(1e-10).max(T::epsilon() * T::lit(1e3)) * (T::one() + scale.abs())
}

impl<T: Real> PotentialModel<T> {
    /// Samples `eval` on `grid`. For periodic domains `V(x+T) = V(x)` is
    /// checked on the overlap of the grid with its translate.
    pub fn new<F>(
        label: impl Into<String>,
        domain: DomainKind<T>,
        grid: Grid1D<T>,
        eval: F,
    ) -> Result<Self>
    where
        F: Fn(T) -> (T, T) + Send + Sync + 'static,
    {
        Self::from_arc(label, domain, grid, Arc::new(eval))
    }

    pub fn from_arc(
        label: impl Into<String>,
        domain: DomainKind<T>,
        grid: Grid1D<T>,
        eval: PotentialFn<T>,
    ) -> Result<Self> {
        let v = SampledFunction::from_real_fn(grid, |x| eval(x));
        if let Some(i) = v.values.iter().position(|z| !z.re.is_finite()) {
            return Err(SusyError::InvalidInput(format!(
                "potential is not finite at x = {}",
                grid.x(i)
            )));
        }
        let model = Self {
            v,
            domain,
            label: label.into(),
            spectrum: None,
            eval,
        };
        model.check_periodicity()?;
        Ok(model)
    }

    fn check_periodicity(&self) -> Result<()> {
        let DomainKind::Periodic { period } = self.domain else {
            return Ok(());
        };
        if !(period > T::zero()) {
            return Err(SusyError::InvalidInput(format!(
                "period must be positive, got {period}"
            )));
        }
        let g = self.v.grid;
        let span = g.x_max() - g.x_min();
        let probes = 64usize;
        for k in 0..probes {
            let x = g.x_min() + span * T::from_usize_lossy(k) / T::from_usize_lossy(probes);
            let (a, _) = self.value(x);
            let (b, _) = self.value(x + period);
            if (a - b).abs() > tolerance_for(a) {
                return Err(SusyError::InvalidInput(format!(
                    "potential '{}' is not periodic with period {period}: V({x}) = {a}, V(x+T) = {b}",
                    self.label
                )));
            }
        }
        Ok(())
    }

    /// Attaches an analytic spectrum `E(n)`, checked to be strictly
    /// increasing on its first levels.
    pub fn with_spectrum<F>(mut self, spectrum: F) -> Result<Self>
    where
        F: Fn(usize) -> T + Send + Sync + 'static,
    {
        for n in 0..32 {
            if !(spectrum(n + 1) > spectrum(n)) {
                return Err(SusyError::InvalidInput(format!(
                    "analytic spectrum is not increasing at n = {n}"
                )));
            }
        }
        self.spectrum = Some(Arc::new(spectrum));
        Ok(self)
    }

    #[inline]
    pub fn value(&self, x: T) -> (T, T) {
        (self.eval)(x)
    }

    pub fn evaluator(&self) -> PotentialFn<T> {
        self.eval.clone()
    }

    pub fn grid(&self) -> &Grid1D<T> {
        &self.v.grid
    }

    pub fn energy(&self, n: usize) -> Option<T> {
        self.spectrum.as_ref().map(|e| e(n))
    }

    pub fn has_spectrum(&self) -> bool {
        self.spectrum.is_some()
    }

    pub fn period(&self) -> Option<T> {
        match self.domain {
            DomainKind::Periodic { period } => Some(period),
            _ => None,
        }
    }

    /// Same potential on another grid.
    pub fn resampled(&self, grid: Grid1D<T>) -> Result<Self> {
        let mut m = Self::from_arc(self.label.clone(), self.domain, grid, self.eval.clone())?;
        m.spectrum = self.spectrum.clone();
        Ok(m)
    }

    /// Distance from `x` to the nearest end of a finite domain.
    pub fn boundary_distance(&self, x: T) -> Option<(T, T)> {
        match self.domain {
            DomainKind::FiniteInterval { left, right } => Some((x - left, right - x)),
            _ => None,
        }
    }
}

/// Behaviour of a solution at one end of the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryTag {
    Vanishes,
    Diverges,
    BoundedNonzero,
}

impl fmt::Display for BoundaryTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryTag::Vanishes => "vanishes",
            BoundaryTag::Diverges => "diverges",
            BoundaryTag::BoundedNonzero => "bounded-nonzero",
        })
    }
}

/// Value and first three derivatives of a function at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet<T> {
    pub f: Cx<T>,
    pub d1: Cx<T>,
    pub d2: Cx<T>,
    pub d3: Cx<T>,
}

impl<T: Real> Jet<T> {
    /// Jet of a solution of `-u''/2 + V u = ε u` from `(u, u')` and `(V, V')`.
    pub fn schrodinger(u: Cx<T>, du: Cx<T>, epsilon: Cx<T>, v: T, dv: T) -> Self {
        let two = T::lit(2.0);
        let shifted = (cx(v) - epsilon) * two;
        let d2 = shifted * u;
        let d3 = u * (dv * two) + shifted * du;
        Self {
            f: u,
            d1: du,
            d2,
            d3,
        }
    }

    pub fn conj(self) -> Self {
        Self {
            f: self.f.conj(),
            d1: self.d1.conj(),
            d2: self.d2.conj(),
            d3: self.d3.conj(),
        }
    }
}

/// A solution of `H0 u = ε u`, not necessarily normalizable.
#[derive(Clone)]
pub struct SeedSolution<T> {
    pub epsilon: Cx<T>,
    pub u: SampledFunction<T>,
    pub boundary_tags: (BoundaryTag, BoundaryTag),
    pub node_count: usize,
    pub construction: String,
    eval: SeedFn<T>,
}

impl<T: Real> fmt::Debug for SeedSolution<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SeedSolution")
            .field("epsilon", &self.epsilon)
            .field("boundary_tags", &self.boundary_tags)
            .field("node_count", &self.node_count)
            .field("construction", &self.construction)
            .finish()
    }
}

impl<T: Real> SeedSolution<T> {
    /// Seed known in closed form. Samples and the node count are derived from
    /// the evaluator.
    pub fn from_evaluator<F>(
        epsilon: Cx<T>,
        grid: Grid1D<T>,
        boundary_tags: (BoundaryTag, BoundaryTag),
        construction: impl Into<String>,
        eval: F,
    ) -> Self
    where
        F: Fn(T) -> (Cx<T>, Cx<T>) + Send + Sync + 'static,
    {
        Self::from_arc(epsilon, grid, boundary_tags, construction, Arc::new(eval))
    }

    pub fn from_arc(
        epsilon: Cx<T>,
        grid: Grid1D<T>,
        boundary_tags: (BoundaryTag, BoundaryTag),
        construction: impl Into<String>,
        eval: SeedFn<T>,
    ) -> Self {
        let mut u = SampledFunction::from_fn(grid, |x| eval(x));
        if epsilon.im == T::zero() && u.max_imag() == T::zero() {
            u = u.into_real();
        }
        let node_count = count_nodes(&u, default_margin(&grid));
        Self {
            epsilon,
            u,
            boundary_tags,
            node_count,
            construction: construction.into(),
            eval,
        }
    }

    /// Seed known only through grid samples of `u` and `u'`. Off-grid values
    /// come from quintic Hermite interpolation using `u'' = 2 (V - ε) u`.
    pub fn from_samples(
        model: &PotentialModel<T>,
        epsilon: Cx<T>,
        u: SampledFunction<T>,
        boundary_tags: (BoundaryTag, BoundaryTag),
        construction: impl Into<String>,
    ) -> Result<Self> {
        let grid = u.grid;
        let second: Vec<Cx<T>> = grid
            .nodes()
            .zip(&u.values)
            .map(|(x, &val)| (cx(model.value(x).0) - epsilon) * T::lit(2.0) * val)
            .collect();
        if u.values
            .iter()
            .chain(&second)
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(SusyError::IntegratorAccuracy(
                "seed samples are not finite".into(),
            ));
        }
        let table = QuinticTable::new(grid, u.values.clone(), u.derivatives.clone(), second);
        let node_count = count_nodes(&u, default_margin(&grid));
        Ok(Self {
            epsilon,
            u,
            boundary_tags,
            node_count,
            construction: construction.into(),
            eval: Arc::new(move |x| table.eval(x)),
        })
    }

    /// Integrates the Schrödinger equation of `model` from node `i0` with the
    /// given initial data.
    pub fn integrate(
        model: &PotentialModel<T>,
        epsilon: T,
        i0: usize,
        u0: T,
        du0: T,
        boundary_tags: (BoundaryTag, BoundaryTag),
        construction: impl Into<String>,
    ) -> Result<Self> {
        let eval = model.evaluator();
        let r = integrate_with(
            move |x| eval(x).0,
            cx(epsilon),
            model.grid(),
            i0,
            cx(u0),
            cx(du0),
            T::lit(DEFAULT_OVERFLOW_CAP),
        );
        if r.overflowed() {
            return Err(SusyError::IntegratorAccuracy(format!(
                "seed at ε = {epsilon} overflowed"
            )));
        }
        Self::from_samples(
            model,
            cx(epsilon),
            r.u.into_real(),
            boundary_tags,
            construction,
        )
    }

    #[inline]
    pub fn value(&self, x: T) -> (Cx<T>, Cx<T>) {
        (self.eval)(x)
    }

    pub fn evaluator(&self) -> SeedFn<T> {
        self.eval.clone()
    }

    /// `(u, u', u'', u''')` at `x` using the potential of `model`.
    pub fn jet(&self, model: &PotentialModel<T>, x: T) -> Jet<T> {
        let (u, du) = self.value(x);
        let (v, dv) = model.value(x);
        Jet::schrodinger(u, du, self.epsilon, v, dv)
    }

    pub fn is_real(&self) -> bool {
        self.epsilon.im == T::zero() && self.u.max_imag() == T::zero()
    }

    /// The complex conjugate solution, at energy `conj(ε)`.
    pub fn conjugate(&self) -> Self {
        let eval = self.eval.clone();
        let mut s = Self::from_arc(
            self.epsilon.conj(),
            self.u.grid,
            self.boundary_tags,
            format!("conj({})", self.construction),
            Arc::new(move |x| {
                let (u, du) = eval(x);
                (u.conj(), du.conj())
            }),
        );
        s.node_count = self.node_count;
        s
    }

    /// `c1 u1 + c2 u2` for two solutions at the same energy.
    pub fn combine(
        c1: T,
        s1: &Self,
        c2: T,
        s2: &Self,
        boundary_tags: (BoundaryTag, BoundaryTag),
        construction: impl Into<String>,
    ) -> Result<Self> {
        if (s1.epsilon - s2.epsilon).norm() > tolerance_for(s1.epsilon.norm()) {
            return Err(SusyError::InconsistentSeed(
                "combined solutions must share their energy".into(),
            ));
        }
        let (e1, e2) = (s1.eval.clone(), s2.eval.clone());
        Ok(Self::from_arc(
            s1.epsilon,
            s1.u.grid,
            boundary_tags,
            construction,
            Arc::new(move |x| {
                let (a, da) = e1(x);
                let (b, db) = e2(x);
                (a * c1 + b * c2, da * c1 + db * c2)
            }),
        ))
    }

    /// Same solution sampled on another grid.
    pub fn resampled(&self, grid: Grid1D<T>) -> Self {
        Self::from_arc(
            self.epsilon,
            grid,
            self.boundary_tags,
            self.construction.clone(),
            self.eval.clone(),
        )
    }

    /// `‖-u''/2 + (V - ε) u‖∞ / ‖(1 + |V| + |ε|) u‖∞` over the interior
    /// nodes. The weight keeps the measure meaningful where `V` is singular.
    ///
    /// `u''` is a sixth-order difference of the evaluator's `u'`, with a step
    /// that shrinks near the ends of a finite domain so that solutions
    /// diverging there are still resolved.
    pub fn residual(&self, model: &PotentialModel<T>) -> T {
        let g = self.u.grid;
        let h = g.spacing();
        let n = g.len();
        if n <= 2 * RESIDUAL_SKIP {
            return T::zero();
        }
        let l = |v: f64| T::lit(v);
        let mut worst = T::zero();
        let mut scale = T::zero();
        for i in RESIDUAL_SKIP..n - RESIDUAL_SKIP {
            let x = g.x(i);
            let d = match model.boundary_distance(x) {
                Some((a, b)) => h.min(a.min(b) / l(200.0)),
                None => h,
            };
            let du = |k: f64| self.value(x + d * l(k)).1;
            let upp = ((du(3.0) - du(-3.0)) - (du(2.0) - du(-2.0)) * l(9.0)
                + (du(1.0) - du(-1.0)) * l(45.0))
                / (l(60.0) * d);
            let u = self.u.values[i];
            let v = model.value(x).0;
            let r = -upp / l(2.0) + (cx(v) - self.epsilon) * u;
            worst = worst.max(r.norm());
            scale = scale.max(u.norm() * (T::one() + v.abs() + self.epsilon.norm()));
        }
        if scale == T::zero() {
            T::zero()
        } else {
            worst / scale
        }
    }
}

/// Relative interior residual of `H u = ε u` for sampled `u`, `u'`, weighted
/// as in [`SeedSolution::residual`].
pub fn schrodinger_residual<T: Real>(
    model: &PotentialModel<T>,
    epsilon: Cx<T>,
    u: &SampledFunction<T>,
) -> T {
    let h = u.grid.spacing();
    let d2 = derivative_6th(&u.derivatives, h);
    let res: Vec<Cx<T>> = (0..u.len())
        .map(|i| match d2[i] {
            Some(upp) => {
                let x = u.grid.x(i);
                -upp / T::lit(2.0) + (cx(model.value(x).0) - epsilon) * u.values[i]
            }
            None => Cx::new(T::zero(), T::zero()),
        })
        .collect();
    let weighted: Vec<Cx<T>> = (0..u.len())
        .map(|i| u.values[i] * (T::one() + model.value(u.grid.x(i)).0.abs() + epsilon.norm()))
        .collect();
    let scale = interior_sup(&weighted, RESIDUAL_SKIP);
    if scale == T::zero() {
        return T::zero();
    }
    interior_sup(&res, RESIDUAL_SKIP) / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oscillator(n: usize) -> PotentialModel<f64> {
        let g = Grid1D::new(-6.0, 6.0, n).unwrap();
        PotentialModel::new("oscillator", DomainKind::WholeLine, g, |x: f64| {
            (x * x / 2.0, x)
        })
        .unwrap()
        .with_spectrum(|n| n as f64 + 0.5)
        .unwrap()
    }

    #[test]
    fn periodicity_is_checked() {
        let g = Grid1D::new(0.0, 10.0, 101).unwrap();
        let ok = PotentialModel::new(
            "sin2",
            DomainKind::Periodic {
                period: std::f64::consts::PI,
            },
            g,
            |x: f64| (5.0 * x.sin().powi(2), 10.0 * x.sin() * x.cos()),
        );
        assert!(ok.is_ok());
        let bad = PotentialModel::new("sin2", DomainKind::Periodic { period: 3.0 }, g, |x: f64| {
            (x.sin().powi(2), 0.0)
        });
        assert!(bad.is_err());
    }

    #[test]
    fn spectrum_must_increase() {
        let g = Grid1D::new(-1.0, 1.0, 11).unwrap();
        let m = PotentialModel::new("flat", DomainKind::WholeLine, g, |_: f64| (0.0, 0.0)).unwrap();
        assert!(m.with_spectrum(|_| 1.0).is_err());
    }

    #[test]
    fn numeric_seed_matches_closed_form() {
        let m = oscillator(1201);
        let i0 = m.grid().nearest_index(0.0);
        let s = SeedSolution::integrate(
            &m,
            0.5,
            i0,
            1.0,
            0.0,
            (BoundaryTag::Vanishes, BoundaryTag::Vanishes),
            "ground",
        )
        .unwrap();
        assert_eq!(s.node_count, 0);
        assert!(s.residual(&m) < 1e-6);
        for &x in &[-2.345, 0.1234, 3.21] {
            let (u, du) = s.value(x);
            let exact = (-x * x / 2.0_f64).exp();
            assert!((u.re - exact).abs() < 1e-8 && (du.re + x * exact).abs() < 1e-7);
        }
    }

    #[test]
    fn jets_follow_the_equation() {
        let m = oscillator(101);
        let s = SeedSolution::from_evaluator(
            cx(0.5),
            *m.grid(),
            (BoundaryTag::Vanishes, BoundaryTag::Vanishes),
            "ground",
            |x: f64| {
                let e = (-x * x / 2.0).exp();
                (cx(e), cx(-x * e))
            },
        );
        let j = s.jet(&m, 0.7);
        let e = (-0.49_f64 / 2.0).exp();
        assert!((j.d2.re - (0.49 - 1.0) * e).abs() < 1e-14);
        assert!((j.d3.re - (3.0 * 0.7 - 0.343) * e).abs() < 1e-14);
    }

    #[test]
    fn conjugate_and_combination() {
        let m = oscillator(101);
        let tags = (BoundaryTag::Diverges, BoundaryTag::Diverges);
        let a = SeedSolution::from_evaluator(Cx::new(1.0, 0.5), *m.grid(), tags, "a", |x: f64| {
            (Cx::new(x, 1.0), Cx::new(1.0, 0.0))
        });
        let c = a.conjugate();
        assert_eq!(c.epsilon, Cx::new(1.0, -0.5));
        assert_eq!(c.value(0.3).0, Cx::new(0.3, -1.0));
        let sum = SeedSolution::combine(2.0, &a, -1.0, &a, tags, "sum").unwrap();
        assert_eq!(sum.value(0.3).0, Cx::new(0.3, 1.0));
        assert!(SeedSolution::combine(1.0, &a, 1.0, &c, tags, "bad").is_err());
    }
}
