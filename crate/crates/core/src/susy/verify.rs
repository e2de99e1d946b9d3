//! Numerical checks of intertwining, factorization and the SUSY algebra.

use std::sync::Arc;

use num_traits::Zero;
use rayon::prelude::*;

use super::PartnerResult;
use crate::error::{Result, SusyError};
use crate::model::PotentialModel;
use crate::numerics::calculus::RESIDUAL_SKIP;
use crate::numerics::ode::{integrate_with, rk4_step, DEFAULT_OVERFLOW_CAP};
use crate::scalar::{cx, Cx, Real};

/// Stencil step at `x`: the grid spacing, shrunk next to the ends of a
/// finite domain so that functions singular there are resolved.
fn local_step<T: Real>(model: &PotentialModel<T>, x: T) -> T {
    let h = model.grid().spacing();
    match model.boundary_distance(x) {
        Some((a, b)) => h.min(a.min(b) / T::lit(200.0)),
        None => h,
    }
}

/// Sixth-order first derivative from samples at offsets `-3..=3` (index 3 is
/// the centre).
fn d1_6<T: Real, V>(f: &[V; 7], d: T) -> V
where
    V: Copy
        + std::ops::Sub<Output = V>
        + std::ops::Add<Output = V>
        + std::ops::Mul<T, Output = V>
        + std::ops::Div<T, Output = V>,
{
    ((f[6] - f[0]) + (f[1] - f[5]) * T::lit(9.0) + (f[4] - f[2]) * T::lit(45.0))
        / (T::lit(60.0) * d)
}

fn d2_6<T: Real>(f: &[T; 7], d: T) -> T {
    ((f[0] + f[6]) * T::lit(2.0) - (f[1] + f[5]) * T::lit(27.0) + (f[2] + f[4]) * T::lit(270.0)
        - f[3] * T::lit(490.0))
        / (T::lit(180.0) * d * d)
}

/// Worst relative residual `‖H_new(Lψ) - E Lψ‖∞ / ‖(1 + |V_new| + |E|) Lψ‖∞`
/// over the interior, for solutions `ψ` of the original equation at each
/// test energy.
///
/// `ψ` is integrated across the grid from the midpoint. At every interior
/// node the same solution is continued by RK4 on a short local stencil, `L`
/// is applied pointwise through all stages of the partner, and `(Lψ)''` is
/// a sixth-order difference of the analytic `(Lψ)'`.
pub fn verify_intertwining<T: Real>(
    v0: &PotentialModel<T>,
    partner: &PartnerResult<T>,
    test_energies: &[T],
) -> Result<T> {
    if test_energies.is_empty() {
        return Err(SusyError::InvalidInput("no test energies".into()));
    }
    let worst: Vec<T> = test_energies
        .par_iter()
        .map(|&e| intertwining_at(v0, partner, e))
        .collect();
    Ok(worst.into_iter().fold(T::zero(), T::max))
}

fn intertwining_at<T: Real>(v0: &PotentialModel<T>, partner: &PartnerResult<T>, energy: T) -> T {
    let grid = *v0.grid();
    let n = grid.len();
    if n <= 2 * RESIDUAL_SKIP {
        return T::zero();
    }
    let v = v0.evaluator();
    let mid = n / 2;
    let run = integrate_with(
        |x| v(x).0,
        cx(energy),
        &grid,
        mid,
        cx(T::one()),
        cx(T::lit(0.5)),
        T::lit(DEFAULT_OVERFLOW_CAP),
    );
    let e = cx(energy);
    let mut worst = T::zero();
    let mut scale = T::zero();
    for i in RESIDUAL_SKIP..n - RESIDUAL_SKIP {
        let (p, dp) = (run.u.values[i], run.u.derivatives[i]);
        if !p.re.is_finite() || !dp.re.is_finite() {
            continue;
        }
        let x = grid.x(i);
        let d = local_step(v0, x);
        let mut psi = [(Cx::<T>::zero(), Cx::<T>::zero()); 7];
        psi[3] = (p, dp);
        for dir in [1isize, -1] {
            let (mut u, mut du) = (p, dp);
            let h = d * T::lit(dir as f64);
            for k in 1..=3isize {
                let x0 = x + h * T::lit((k - 1) as f64);
                let (a, b, c) = (v(x0).0, v(x0 + h / T::lit(2.0)).0, v(x0 + h).0);
                (u, du) = rk4_step(u, du, h, e, a, b, c);
                psi[(3 + dir * k) as usize] = (u, du);
            }
        }
        let mut f = [Cx::<T>::zero(); 7];
        let mut df = [Cx::<T>::zero(); 7];
        for k in 0..7 {
            let xk = x + d * T::lit(k as f64 - 3.0);
            let (mut a, mut b) = psi[k];
            for s in &partner.stages {
                (a, b) = s.apply(xk, e, a, b);
            }
            f[k] = a;
            df[k] = b;
        }
        let fpp = d1_6(&df, d);
        let vn = partner.potential.value(x).0;
        let r = -fpp / T::lit(2.0) + (cx(vn) - e) * f[3];
        worst = worst.max(r.norm());
        scale = scale.max(f[3].norm() * (T::one() + vn.abs() + energy.abs()));
    }
    if scale == T::zero() {
        T::zero()
    } else {
        worst / scale
    }
}

/// Smooth test function with analytic derivatives up to the third:
/// a Gaussian window times a trigonometric sum.
#[derive(Clone)]
pub struct TestFunction<T> {
    jet: Arc<dyn Fn(T) -> [T; 4] + Send + Sync>,
}

impl<T: Real> TestFunction<T> {
    /// `exp(-((x - center)/width)²) Σ a_j cos(k_j x + φ_j)` for `modes`
    /// `(a_j, k_j, φ_j)`.
    pub fn windowed_trig(center: T, width: T, modes: Vec<(T, T, T)>) -> Self {
        let jet = move |x: T| {
            let s = (x - center) / width;
            let g = (-s * s).exp();
            let two = T::lit(2.0);
            let gs = [
                g,
                -two * s / width * g,
                (T::lit(4.0) * s * s - two) / (width * width) * g,
                (T::lit(-8.0) * s * s * s + T::lit(12.0) * s) / (width * width * width) * g,
            ];
            let mut hs = [T::zero(); 4];
            for &(a, k, phi) in &modes {
                let (sn, cs) = (k * x + phi).sin_cos();
                hs[0] += a * cs;
                hs[1] -= a * k * sn;
                hs[2] -= a * k * k * cs;
                hs[3] += a * k * k * k * sn;
            }
            let three = T::lit(3.0);
            [
                gs[0] * hs[0],
                gs[1] * hs[0] + gs[0] * hs[1],
                gs[2] * hs[0] + two * gs[1] * hs[1] + gs[0] * hs[2],
                gs[3] * hs[0] + three * gs[2] * hs[1] + three * gs[1] * hs[2] + gs[0] * hs[3],
            ]
        };
        Self { jet: Arc::new(jet) }
    }

    #[inline]
    pub fn jet(&self, x: T) -> [T; 4] {
        (self.jet)(x)
    }
}

/// `α`, `α'`, `α''` of a first-order stage at `x`, the derivatives by
/// sixth-order differences of `α` itself.
fn alpha_jet<T: Real>(partner: &PartnerResult<T>, model: &PotentialModel<T>, x: T) -> [T; 3] {
    let stage = &partner.stages[0];
    let d = local_step(model, x) * T::lit(4.0);
    let mut a = [T::zero(); 7];
    for (k, slot) in a.iter_mut().enumerate() {
        *slot = stage.eta(x + d * T::lit(k as f64 - 3.0)).eta;
    }
    [a[3], d1_6(&a, d), d2_6(&a, d)]
}

fn first_order_stage<T: Real>(partner: &PartnerResult<T>) -> Result<T> {
    if partner.order != 1 || partner.stages.len() != 1 {
        return Err(SusyError::InvalidInput(
            "the SUSY algebra check needs a first-order partner".into(),
        ));
    }
    Ok(partner.stages[0].epsilons.0.re)
}

/// Interior nodes of the model's grid.
fn interior<T: Real>(model: &PotentialModel<T>) -> impl Iterator<Item = T> + '_ {
    let g = model.grid();
    (RESIDUAL_SKIP..g.len().saturating_sub(RESIDUAL_SKIP)).map(move |i| g.x(i))
}

/// `A A⁺ + ε = H0` applied to test functions, with `A = (d/dx + α)/√2`.
/// Returns `sup|A A⁺ f + ε f - H0 f| / sup|H0 f|` over all functions.
pub fn factorization_residual<T: Real>(
    v0: &PotentialModel<T>,
    partner: &PartnerResult<T>,
    tests: &[TestFunction<T>],
) -> Result<T> {
    let eps = first_order_stage(partner)?;
    let mut worst = T::zero();
    for t in tests {
        let (mut num, mut den) = (T::zero(), T::zero());
        for x in interior(v0) {
            let [f, f1, f2, _] = t.jet(x);
            let [a, a1, _] = alpha_jet(partner, v0, x);
            let v = v0.value(x).0;
            let half = T::lit(0.5);
            // A(A⁺ f) = ((A⁺f)' + α A⁺f)/√2, A⁺f = (-f' + α f)/√2
            let ap = -f1 + a * f;
            let dap = -f2 + a1 * f + a * f1;
            let lhs = half * (dap + a * ap) + eps * f;
            let h0 = -half * f2 + v * f;
            num = num.max((lhs - h0).abs());
            den = den.max(h0.abs());
        }
        if den > T::zero() {
            worst = worst.max(num / den);
        }
    }
    Ok(worst)
}

/// Witten algebra for a first-order partner on two-component functions
/// `(ψ1, ψ0)`, with `Q = [[0, 0], [A, 0]]`, `Q⁺ = [[0, A⁺], [0, 0]]` and
/// `H_ss = diag(H1, H0)`.
///
/// Checks `Q² = 0`, `{Q, Q⁺} = diag(H1 - ε, H0 - ε)` and `[Q, H_ss] = 0` on
/// consecutive pairs of test functions and returns the worst relative
/// residual.
pub fn verify_susy_algebra<T: Real>(
    v0: &PotentialModel<T>,
    partner: &PartnerResult<T>,
    tests: &[TestFunction<T>],
) -> Result<T> {
    let eps = first_order_stage(partner)?;
    if tests.len() < 2 {
        return Err(SusyError::InvalidInput(
            "the SUSY algebra check needs at least two test functions".into(),
        ));
    }
    let half = T::lit(0.5);
    let r2 = half.sqrt();
    let mut worst = T::zero();
    for pair in 0..tests.len() {
        let (top, bottom) = (&tests[pair], &tests[(pair + 1) % tests.len()]);
        let mut nilpotent = T::zero();
        let (mut anti, mut anti_den) = (T::zero(), T::zero());
        let (mut comm, mut comm_den) = (T::zero(), T::zero());
        for x in interior(v0) {
            let [a, a1, a2] = alpha_jet(partner, v0, x);
            let v0x = v0.value(x).0;
            let (v1x, dv1x) = partner.potential.value(x);
            let [f, f1, f2, f3] = top.jet(x);
            let [g, g1, g2, _] = bottom.jet(x);

            // Q(ψ1, ψ0) = (0, A ψ1): the top component of Qψ is the zero function
            let q_bottom = |top: T, dtop: T| r2 * (dtop + a * top);
            let qv = (T::zero(), q_bottom(f, f1));
            let qqv = q_bottom(qv.0, T::zero());
            nilpotent = nilpotent.max(qqv.abs() / (T::one() + qv.1.abs()));

            // {Q, Q⁺}(ψ1, ψ0) = (A⁺A ψ1, A A⁺ ψ0)
            let af = f1 + a * f;
            let daf = f2 + a1 * f + a * f1;
            let top_lhs = half * (-daf + a * af);
            let ag = -g1 + a * g;
            let dag = -g2 + a1 * g + a * g1;
            let bottom_lhs = half * (dag + a * ag);
            let top_rhs = -half * f2 + (v1x - eps) * f;
            let bottom_rhs = -half * g2 + (v0x - eps) * g;
            anti = anti
                .max((top_lhs - top_rhs).abs())
                .max((bottom_lhs - bottom_rhs).abs());
            anti_den = anti_den.max(top_rhs.abs()).max(bottom_rhs.abs());

            // [Q, H_ss](ψ1, ψ0) = (0, A H1 ψ1 - H0 A ψ1)
            let h1f = -half * f2 + v1x * f;
            let dh1f = -half * f3 + dv1x * f + v1x * f1;
            let a_h1f = r2 * (dh1f + a * h1f);
            let d2af = f3 + a2 * f + T::lit(2.0) * a1 * f1 + a * f2;
            let h0_af = r2 * (-half * d2af + v0x * (f1 + a * f));
            comm = comm.max((a_h1f - h0_af).abs());
            comm_den = comm_den.max(a_h1f.abs());
        }
        worst = worst.max(nilpotent);
        if anti_den > T::zero() {
            worst = worst.max(anti / anti_den);
        }
        if comm_den > T::zero() {
            worst = worst.max(comm / comm_den);
        }
    }
    Ok(worst)
}
