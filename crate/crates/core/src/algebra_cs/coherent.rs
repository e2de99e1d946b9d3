//! Coherent states as eigenvectors of the annihilation operators, with
//! their kernels, moments and time evolution.

use crate::error::{Result, SusyError};
use crate::numerics::calculus::gauss_legendre_adaptive;
use crate::scalar::{cx, Cx, Real};

use super::ladder::{
    ladder_apply, ladder_coefficient, Direction, LadderKind, LadderSpec, LadderState,
};

/// Hard cap on the number of isospectral slots kept.
pub const MAX_TRUNCATION: usize = 500;
/// Default bound on the norm of the dropped tail.
pub const DEFAULT_TOLERANCE: f64 = 1e-14;

/// Terms are rescaled once the running sum exceeds this.
const RESCALE: f64 = 1e150;

/// `|z, α⟩` of the given kind, truncated to `truncation + 1` isospectral
/// slots. New-level slots of `H2` states are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentState<T> {
    pub kind: LadderKind,
    pub z: Cx<T>,
    pub alpha: T,
    pub truncation: usize,
    /// `c_0 ..= c_N`, normalized over the kept slots.
    pub coefficients: Vec<Cx<T>>,
    /// Estimated squared norm of the dropped tail relative to the whole state.
    pub norm_residual: T,
    pub new_level_slots: usize,
}

impl<T: Real> CoherentState<T> {
    pub fn state(&self) -> LadderState<T> {
        LadderState {
            new_levels: vec![cx(T::zero()); self.new_level_slots],
            levels: self.coefficients.clone(),
        }
    }
}

/// Geometric bound on `Σ_{m>n} t_m` given `t_{n+1}` and the ratio `q` of
/// `t_{n+2} / t_{n+1}`, valid when ratios decrease from there on.
fn tail_bound<T: Real>(next: T, q: T) -> Option<T> {
    (q < T::one()).then(|| next / (T::one() - q))
}

/// Terms `w^m / ρ_m` (`ρ_m = Π |r(k)|²`) of a moment series, summed until the
/// dropped tail is below `rel_tol` relative to the sum.
fn moment_series<T: Real>(spec: &LadderSpec<T>, w: Cx<T>, rel_tol: T) -> Result<Cx<T>> {
    let mut term = cx(T::one());
    let mut sum = term;
    for m in 1..=MAX_TRUNCATION {
        let r2 = ladder_coefficient(spec, m).norm_sqr();
        if r2 == T::zero() {
            return if w == cx(T::zero()) {
                Ok(sum)
            } else {
                Err(degenerate(m))
            };
        }
        term = term * w / r2;
        sum += term;
        if spec.monotone_from(m) {
            let r_next = ladder_coefficient(spec, m + 1).norm_sqr();
            let q = w.norm() / r_next;
            if let Some(t) = tail_bound(term.norm() * q, q) {
                if t <= rel_tol * sum.norm() {
                    return Ok(sum);
                }
            }
        }
    }
    Err(SusyError::NoConvergence(format!(
        "moment series at w = {w} did not converge within {MAX_TRUNCATION} terms"
    )))
}

fn degenerate(m: usize) -> SusyError {
    SusyError::Degenerate(format!(
        "the ladder coefficient r({m}) vanishes, so only z = 0 has an eigenvector"
    ))
}

/// Coefficients `c_m ∝ z^m / (r(1)...r(m))` from the forward recurrence
/// `c_m = z c_{m-1} / r(m)`, truncated once the dropped tail has norm at most
/// `tol`.
pub fn coherent_coefficients<T: Real>(
    spec: &LadderSpec<T>,
    z: Cx<T>,
    tol: T,
) -> Result<CoherentState<T>> {
    if !(tol > T::zero()) {
        return Err(SusyError::InvalidInput(format!(
            "truncation tolerance {tol} must be positive"
        )));
    }
    let make = |coefficients: Vec<Cx<T>>, norm_residual: T| CoherentState {
        kind: spec.kind,
        z,
        alpha: spec.alpha,
        truncation: coefficients.len() - 1,
        coefficients,
        norm_residual,
        new_level_slots: spec.new_level_slots(),
    };
    if z == cx(T::zero()) {
        return Ok(make(vec![cx(T::one())], T::zero()));
    }
    let z2 = z.norm_sqr();
    let mut c = vec![cx(T::one())];
    let mut mass = T::one();
    for m in 1..=MAX_TRUNCATION {
        let r = ladder_coefficient(spec, m);
        if r.norm() == T::zero() {
            return Err(degenerate(m));
        }
        let next = c[m - 1] * z / r;
        mass += next.norm_sqr();
        c.push(next);
        if mass > T::lit(RESCALE) {
            let k = mass.sqrt();
            c.iter_mut().for_each(|v| *v /= k);
            mass = T::one();
        }
        if spec.monotone_from(m + 1) {
            let q1 = z2 / ladder_coefficient(spec, m + 1).norm_sqr();
            let q2 = z2 / ladder_coefficient(spec, m + 2).norm_sqr();
            if let Some(tail) = tail_bound(c[m].norm_sqr() * q1, q2) {
                if tail <= tol * tol * mass {
                    let k = mass.sqrt();
                    c.iter_mut().for_each(|v| *v /= k);
                    return Ok(make(c, tail / mass));
                }
            }
        }
    }
    Err(SusyError::NoConvergence(format!(
        "coherent state at z = {z} needs more than {MAX_TRUNCATION} levels for tail {tol}"
    )))
}

/// `‖a⁻|z⟩ - z|z⟩‖` in the truncated basis.
pub fn eigenvalue_residual<T: Real>(spec: &LadderSpec<T>, cs: &CoherentState<T>) -> Result<T> {
    let s = cs.state();
    Ok(ladder_apply(spec, &s, Direction::Lower)?
        .sub(&s.scaled(cs.z))
        .norm())
}

/// `⟨z, α | z', α⟩` from the moment series
/// `S(w) = Σ w^m / ρ_m`: `S(z̄ z') / √(S(|z|²) S(|z'|²))`.
pub fn reproducing_kernel<T: Real>(
    spec: &LadderSpec<T>,
    z: Cx<T>,
    z_prime: Cx<T>,
) -> Result<Cx<T>> {
    let tol = T::epsilon() / T::lit(8.0);
    let a = moment_series(spec, cx(z.norm_sqr()), tol)?;
    let b = moment_series(spec, cx(z_prime.norm_sqr()), tol)?;
    let c = moment_series(spec, z.conj() * z_prime, tol)?;
    Ok(c / (a.re * b.re).sqrt())
}

/// `exp(-|z|²/2 + z̄ z' - |z'|²/2)`, the kernel of the linear kind.
pub fn linear_kernel<T: Real>(z: Cx<T>, z_prime: Cx<T>) -> Cx<T> {
    let half = T::lit(0.5);
    (z.conj() * z_prime - cx(half * (z.norm_sqr() + z_prime.norm_sqr()))).exp()
}

/// Moment sequence `ρ_0 ..= ρ_max_m` of a kind, with a quadrature check of
/// `∫ y^m e^{-y} dy = m!` for the linear kind.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport<T> {
    pub kind: LadderKind,
    pub moments: Vec<T>,
    /// Quadrature values of `∫₀^∞ y^m e^{-y} dy` (linear kind only).
    pub quadrature: Option<Vec<T>>,
    pub max_relative_error: Option<T>,
}

/// `ρ_m = Π_{k ≤ m} |r(k)|²`, i.e. `(E_m - E_0)...(E_1 - E_0)` for the
/// intrinsic kind, `m!` for the linear one and `ρ̃_m` for the natural one.
pub fn moments<T: Real>(spec: &LadderSpec<T>, max_m: usize) -> Vec<T> {
    let mut rho = vec![T::one()];
    for m in 1..=max_m {
        rho.push(rho[m - 1] * ladder_coefficient(spec, m).norm_sqr());
    }
    rho
}

pub fn moment_check<T: Real>(spec: &LadderSpec<T>, max_m: usize) -> MomentReport<T> {
    let rho = moments(spec, max_m);
    let (quadrature, max_relative_error) = if spec.kind == LadderKind::Linear {
        let q: Vec<T> = (0..=max_m)
            .map(|m| {
                let f = |y: T| y.powi(m as i32) * (-y).exp();
                // unit panels out to where y^m e^{-y} is negligible
                let end = 60 + 4 * m;
                (0..end)
                    .map(|k| {
                        gauss_legendre_adaptive(
                            &f,
                            T::from_usize_lossy(k),
                            T::from_usize_lossy(k + 1),
                            T::lit(1e-14),
                        )
                    })
                    .sum()
            })
            .collect();
        let err = q
            .iter()
            .zip(&rho)
            .map(|(a, b)| ((*a - *b) / *b).abs())
            .fold(T::zero(), T::max);
        (Some(q), Some(err))
    } else {
        (None, None)
    };
    MomentReport {
        kind: spec.kind,
        moments: rho,
        quadrature,
        max_relative_error,
    }
}

/// Largest `|e^{-iE_m t} c_m(α) - e^{-itE_0} c_m(α + t)|` over the kept
/// slots.
pub fn evolution_check<T: Real>(spec: &LadderSpec<T>, z: Cx<T>, t: T, tol: T) -> Result<T> {
    let now = coherent_coefficients(spec, z, tol)?;
    let later = coherent_coefficients(&spec.with_alpha(spec.alpha + t), z, tol)?;
    if now.truncation != later.truncation {
        return Err(SusyError::InvalidInput(
            "truncations differ between α and α + t".into(),
        ));
    }
    let e0 = spec.energy(0);
    let global = Cx::from_polar(T::one(), -t * e0);
    Ok(now
        .coefficients
        .iter()
        .zip(&later.coefficients)
        .enumerate()
        .map(|(m, (&a, &b))| {
            (a * Cx::from_polar(T::one(), -t * spec.energy(m)) - b * global).norm()
        })
        .fold(T::zero(), T::max))
}

/// Dimension of the kernel of `a⁻` on the new-level slots plus `dim`
/// isospectral slots. Lowering sends distinct basis vectors to distinct
/// slots, so the kernel is spanned by the basis vectors it annihilates.
pub fn kernel_degeneracy<T: Real>(spec: &LadderSpec<T>, dim: usize) -> Result<usize> {
    let k = spec.new_level_slots();
    let mut count = 0;
    for i in 0..k {
        if ladder_apply(spec, &LadderState::new_level(k, dim, i), Direction::Lower)?.norm()
            == T::zero()
        {
            count += 1;
        }
    }
    for n in 0..dim {
        if ladder_apply(spec, &LadderState::basis(k, dim, n), Direction::Lower)?.norm() == T::zero()
        {
            count += 1;
        }
    }
    Ok(count)
}
