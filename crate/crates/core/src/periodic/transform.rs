//! SUSY transformations of periodic potentials with Bloch seeds (periodic
//! partners) or real combinations of Bloch functions (asymptotically periodic
//! partners with bound states in the gaps).

use crate::error::{Result, SusyError};
use crate::model::{BoundaryTag, DomainKind, PotentialModel, SeedSolution};
use crate::numerics::calculus::{default_margin, first_sign_change};
use crate::scalar::{Cx, Real};
use crate::susy::{first_order_partner, second_order_real, PartnerResult};

use super::floquet::{bloch_functions, Floquet, Regime};

/// Cells at each end used for asymptotic checks.
pub const FAR_CELLS: usize = 2;

fn period_of<T: Real>(model: &PotentialModel<T>) -> Result<T> {
    model.period().ok_or_else(|| {
        SusyError::InvalidInput(format!("potential '{}' is not periodic", model.label))
    })
}

/// The same potential and grid regarded as living on the whole line, for
/// partners that are only asymptotically periodic.
pub fn whole_line<T: Real>(model: &PotentialModel<T>) -> Result<PotentialModel<T>> {
    PotentialModel::from_arc(
        model.label.clone(),
        DomainKind::WholeLine,
        *model.grid(),
        model.evaluator(),
    )
}

/// Floquet multiplier of `seed` if `u(x + T) = β u(x)` holds to `1e-6` at
/// probe points across the grid.
pub fn bloch_multiplier<T: Real>(seed: &SeedSolution<T>, period: T) -> Option<Cx<T>> {
    let g = seed.u.grid;
    let mut beta: Option<Cx<T>> = None;
    for k in 1..8 {
        let x = g.x_min() + (g.x_max() - g.x_min() - period) * T::from_usize_lossy(k) / T::lit(8.0);
        let (a, _) = seed.value(x);
        let (b, _) = seed.value(x + period);
        if a.norm() <= T::lit(1e-12) * (T::one() + b.norm()) {
            continue;
        }
        let r = b / a;
        match beta {
            None => beta = Some(r),
            Some(b0) if (r - b0).norm() > T::lit(1e-6) * (T::one() + b0.norm()) => return None,
            _ => {}
        }
    }
    beta
}

/// First-order partner from a nodeless Bloch function with `ε ≤ E0`. The
/// partner is periodic (checked when it is built) and isospectral.
pub fn susy_periodic_first<T: Real>(
    model: &PotentialModel<T>,
    seed: &SeedSolution<T>,
) -> Result<PartnerResult<T>> {
    let period = period_of(model)?;
    let beta = bloch_multiplier(seed, period).ok_or_else(|| {
        SusyError::InvalidInput("the seed is not a Bloch function of the potential".into())
    })?;
    if beta.re <= T::zero() || beta.im.abs() > T::lit(1e-9) {
        return Err(SusyError::InvalidInput(format!(
            "a nodeless Bloch seed has a positive real multiplier, got {beta}"
        )));
    }
    let d = Floquet::new(model)?.discriminant(seed.epsilon.re)?;
    if d < T::lit(2.0) - T::lit(1e-8) {
        return Err(SusyError::ParameterBounds(format!(
            "ε = {} lies inside a band (D = {d}); Bloch seeds need ε ≤ E0",
            seed.epsilon.re
        )));
    }
    first_order_partner(model, seed)
}

/// `c₊ u₊ + c₋ u₋` at an energy inside a gap.
pub fn bloch_combination<T: Real>(
    model: &PotentialModel<T>,
    e: T,
    c_plus: T,
    c_minus: T,
) -> Result<SeedSolution<T>> {
    let b = bloch_functions(model, e)?;
    if b.floquet.regime != Regime::Gap {
        return Err(SusyError::ParameterBounds(format!(
            "E = {e} is not inside a gap ({}); combinations need real Bloch functions",
            b.floquet.regime
        )));
    }
    let tags = match (c_plus != T::zero(), c_minus != T::zero()) {
        (true, true) => (BoundaryTag::Diverges, BoundaryTag::Diverges),
        (true, false) => b.plus.boundary_tags,
        (false, true) => b.minus.boundary_tags,
        (false, false) => {
            return Err(SusyError::InvalidInput(
                "both combination coefficients vanish".into(),
            ))
        }
    };
    SeedSolution::combine(
        c_plus,
        &b.plus,
        c_minus,
        &b.minus,
        tags,
        format!("{c_plus} u+ + {c_minus} u- at E = {e}"),
    )
}

/// First-order partner from a nodeless combination of Bloch functions with
/// `ε < E0`, diverging in both directions. The partner lives on the whole
/// line and gains the bound state `1/u` at `ε`.
pub fn susy_periodic_first_general<T: Real>(
    model: &PotentialModel<T>,
    seed: &SeedSolution<T>,
) -> Result<PartnerResult<T>> {
    period_of(model)?;
    let d = Floquet::new(model)?.discriminant(seed.epsilon.re)?;
    if d <= T::lit(2.0) {
        return Err(SusyError::ParameterBounds(format!(
            "ε = {} must lie below the lowest band (D = {d})",
            seed.epsilon.re
        )));
    }
    first_order_partner(&whole_line(model)?, seed)
}

/// Second-order partner from two real seeds. Bloch seeds keep the partner
/// periodic; any non-Bloch seed moves the transformation to the whole line.
pub fn susy_periodic_second<T: Real>(
    model: &PotentialModel<T>,
    seed1: &SeedSolution<T>,
    seed2: &SeedSolution<T>,
) -> Result<PartnerResult<T>> {
    let period = period_of(model)?;
    let bloch =
        bloch_multiplier(seed1, period).is_some() && bloch_multiplier(seed2, period).is_some();
    if bloch {
        second_order_real(model, seed1, seed2)
    } else {
        second_order_real(&whole_line(model)?, seed1, seed2)
    }
}

fn nodeless_wronskian<T: Real>(s1: &SeedSolution<T>, s2: &SeedSolution<T>) -> bool {
    let g = s1.u.grid;
    let w: Vec<T> = (0..g.len())
        .map(|i| (s1.u.values[i] * s2.u.derivatives[i] - s1.u.derivatives[i] * s2.u.values[i]).re)
        .collect();
    first_sign_change(&g, &w, default_margin(&g)).is_none()
}

/// Two combination seeds `u₊ + c u₋` at energies in one gap whose Wronskian
/// is nodeless on the grid. The relative signs and sizes of the coefficients
/// are searched over a small set.
pub fn gap_seed_pair<T: Real>(
    model: &PotentialModel<T>,
    e1: T,
    e2: T,
) -> Result<(SeedSolution<T>, SeedSolution<T>)> {
    let s1 = bloch_combination(model, e1, T::one(), T::one())?;
    for scale in [1.0, 0.1, 10.0, 0.01, 100.0] {
        for sign in [1.0, -1.0] {
            let c = T::lit(sign * scale);
            let s2 = bloch_combination(model, e2, T::one(), c)?;
            if nodeless_wronskian(&s1, &s2) {
                return Ok((s1, s2));
            }
        }
    }
    Err(SusyError::SingularTransform {
        what: format!("Wronskian of gap combinations at {e1}, {e2}"),
        location: f64::NAN,
    })
}

/// `sup |V(x) - V(x ∓ T)|` over the outermost `cells` periods at the left and
/// right ends of the grid.
pub fn periodicity_defect<T: Real>(model: &PotentialModel<T>, period: T, cells: usize) -> (T, T) {
    let g = *model.grid();
    let span = period * T::from_usize_lossy(cells);
    let mut left = T::zero();
    let mut right = T::zero();
    for x in g.nodes() {
        if x <= g.x_min() + span {
            left = left.max((model.value(x).0 - model.value(x + period).0).abs());
        }
        if x >= g.x_max() - span {
            right = right.max((model.value(x).0 - model.value(x - period).0).abs());
        }
    }
    (left, right)
}

/// Best translate `V0(x + s)` of the original potential matching the partner
/// over a far window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TranslateMatch<T> {
    pub shift: T,
    pub deviation: T,
}

fn window_deviation<T: Real>(
    v_new: &PotentialModel<T>,
    v0: &PotentialModel<T>,
    xs: &[T],
    s: T,
) -> T {
    xs.iter().fold(T::zero(), |m, &x| {
        m.max((v_new.value(x).0 - v0.value(x + s).0).abs())
    })
}

fn best_translate<T: Real>(
    v_new: &PotentialModel<T>,
    v0: &PotentialModel<T>,
    period: T,
    xs: &[T],
) -> TranslateMatch<T> {
    let scan = 400;
    let ds = period / T::from_usize_lossy(scan);
    let (mut best_s, mut best) = (T::zero(), T::infinity());
    for k in 0..scan {
        let s = ds * T::from_usize_lossy(k);
        let d = window_deviation(v_new, v0, xs, s);
        if d < best {
            best = d;
            best_s = s;
        }
    }
    let r = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let (mut a, mut b) = (best_s - ds, best_s + ds);
    let f = |s: T| window_deviation(v_new, v0, xs, s);
    let (mut x1, mut x2) = (b - r * (b - a), a + r * (b - a));
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..100 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
    }
    let s = (a + b) / T::lit(2.0);
    let d = f(s);
    let (shift, deviation) = if d < best { (s, d) } else { (best_s, best) };
    let shift = shift - (shift / period).floor() * period;
    TranslateMatch { shift, deviation }
}

/// Translates of `v0` closest to `v_new` over the outermost `cells` periods
/// at each end of `v_new`'s grid, as `(left, right)`.
pub fn far_cell_translates<T: Real>(
    v_new: &PotentialModel<T>,
    v0: &PotentialModel<T>,
    period: T,
    cells: usize,
) -> (TranslateMatch<T>, TranslateMatch<T>) {
    let g = *v_new.grid();
    let span = period * T::from_usize_lossy(cells);
    let probes = 200 * cells.max(1);
    let window = |a: T| -> Vec<T> {
        (0..=probes)
            .map(|k| a + span * T::from_usize_lossy(k) / T::from_usize_lossy(probes))
            .collect()
    };
    let left = best_translate(v_new, v0, period, &window(g.x_min()));
    let right = best_translate(v_new, v0, period, &window(g.x_max() - span));
    (left, right)
}

/// Periodic continuation of the period `[start, start + T)` of `v_new`,
/// translated to the origin, for Floquet analysis of a far cell.
pub fn far_cell_model<T: Real>(
    v_new: &PotentialModel<T>,
    period: T,
    start: T,
) -> Result<PotentialModel<T>> {
    let eval = v_new.evaluator();
    let wrap = move |x: T| start + x - (x / period).floor() * period;
    let grid = crate::numerics::grid::Grid1D::new(T::zero(), period, 401)?;
    PotentialModel::new(
        format!("far cell of {}", v_new.label),
        DomainKind::Periodic { period },
        grid,
        move |x| eval(wrap(x)),
    )
}
