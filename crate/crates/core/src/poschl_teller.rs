//! Trigonometric Pöschl-Teller potential
//! `V(x) = (λ-1)λ / (2 sin²x) + (ν-1)ν / (2 cos²x)` on `(0, π/2)`.

use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Result, SusyError};
use crate::model::{BoundaryTag, DomainKind, PotentialModel, SeedSolution};
use crate::numerics::calculus::{cumulative_integral, normalize, simpson};
use crate::numerics::grid::{Grid1D, SampledFunction};
use crate::numerics::special::{gamma, rgamma, Hyp2F1};
use crate::scalar::{csqrt, cx, Cx, Real};

/// Default number of grid points on `(0, π/2)`.
pub const DEFAULT_POINTS: usize = 2001;

/// Largest `sin²x` at which the confluent `w` series is summed.
pub const CONFLUENT_SERIES_LIMIT: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PTParams<T> {
    pub lambda: T,
    pub nu: T,
}

impl<T: Real> PTParams<T> {
    pub fn new(lambda: T, nu: T) -> Result<Self> {
        if !(lambda > T::one()) || !(nu > T::one()) {
            return Err(SusyError::ParameterBounds(format!(
                "Pöschl-Teller parameters need λ > 1 and ν > 1 (got λ = {lambda}, ν = {nu})"
            )));
        }
        Ok(Self { lambda, nu })
    }

    pub fn mu(&self) -> T {
        self.lambda + self.nu
    }

    /// Checks `λ > bound` and `ν > bound`, as required by particular
    /// transformations.
    pub fn require_above(&self, bound: T, what: &str) -> Result<()> {
        if self.lambda > bound && self.nu > bound {
            Ok(())
        } else {
            Err(SusyError::ParameterBounds(format!(
                "{what} requires λ > {bound} and ν > {bound} (got λ = {}, ν = {})",
                self.lambda, self.nu
            )))
        }
    }
}

/// `V(x)`.
pub fn pt_potential<T: Real>(p: PTParams<T>, x: T) -> T {
    pt_potential_with_derivative(p, x).0
}

/// `(V(x), V'(x))`.
pub fn pt_potential_with_derivative<T: Real>(p: PTParams<T>, x: T) -> (T, T) {
    let (s, c) = x.sin_cos();
    let gl = (p.lambda - T::one()) * p.lambda;
    let gn = (p.nu - T::one()) * p.nu;
    let two = T::lit(2.0);
    let v = gl / (two * s * s) + gn / (two * c * c);
    let dv = -gl * c / (s * s * s) + gn * s / (c * c * c);
    (v, dv)
}

/// `E_n = (μ + 2n)² / 2`.
pub fn pt_eigenvalue<T: Real>(p: PTParams<T>, n: usize) -> T {
    let e = p.mu() + T::lit(2.0) * T::from_usize_lossy(n);
    e * e / T::lit(2.0)
}

/// Grid on `(0, π/2)` whose nodes stay half a spacing away from both ends.
pub fn pt_grid<T: Real>(n_points: usize) -> Result<Grid1D<T>> {
    Grid1D::open_interval(T::zero(), T::FRAC_PI_2(), n_points)
}

/// The potential as a model with its analytic spectrum.
pub fn pt_model<T: Real>(p: PTParams<T>, grid: Grid1D<T>) -> Result<PotentialModel<T>> {
    let label = format!("PT(λ={}, ν={})", p.lambda, p.nu);
    let domain = DomainKind::FiniteInterval {
        left: T::zero(),
        right: T::FRAC_PI_2(),
    };
    PotentialModel::new(label, domain, grid, move |x| {
        pt_potential_with_derivative(p, x)
    })?
    .with_spectrum(move |n| pt_eigenvalue(p, n))
}

/// Hypergeometric parameters of the two independent solutions.
fn hyp_params<T: Real>(p: PTParams<T>, epsilon: Cx<T>) -> ([Cx<T>; 3], [Cx<T>; 3]) {
    let k = csqrt(epsilon / T::lit(2.0));
    let half = T::lit(0.5);
    let m2 = cx(p.mu() * half);
    let r2 = cx((T::one() + p.nu - p.lambda) * half);
    (
        [m2 + k, m2 - k, cx(p.lambda + half)],
        [r2 + k, r2 - k, cx(T::lit(1.5) - p.lambda)],
    )
}

fn is_gamma_pole<T: Real>(z: Cx<T>) -> bool {
    z.im == T::zero() && z.re <= T::zero() && (z.re - z.re.round()).abs() < T::lit(1e-12)
}

fn a_coefficient<T: Real>(p: PTParams<T>, epsilon: Cx<T>) -> Cx<T> {
    let ([a1, b1, c1], _) = hyp_params(p, epsilon);
    gamma(c1) * gamma(cx(p.nu - T::lit(0.5))) * rgamma(a1) * rgamma(b1)
}

fn b_coefficient<T: Real>(p: PTParams<T>, epsilon: Cx<T>) -> Result<Cx<T>> {
    let (_, [a2, b2, c2]) = hyp_params(p, epsilon);
    if is_gamma_pole(c2) {
        return Err(SusyError::Degenerate(format!(
            "3/2 - λ = {} is a pole of Γ",
            c2.re
        )));
    }
    Ok(gamma(c2) * gamma(cx(p.nu - T::lit(0.5))) * rgamma(a2) * rgamma(b2))
}

/// Coefficients `a`, `b` of the divergent `cos^{1-ν}` behaviour of the two
/// solutions at `π/2`. A Gamma pole in a denominator gives the limit value 0.
pub fn pt_ab_coefficients<T: Real>(p: PTParams<T>, epsilon: Cx<T>) -> Result<(Cx<T>, Cx<T>)> {
    Ok((a_coefficient(p, epsilon), b_coefficient(p, epsilon)?))
}

/// Coefficients of `u = sin^λ cos^ν {A F1 + B sin^{1-2λ} F2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PTSeedRecipe<T> {
    pub epsilon: Cx<T>,
    pub a_weight: Cx<T>,
    pub b_weight: Cx<T>,
    pub q: Option<T>,
    pub a_coef: Cx<T>,
    pub b_coef: Cx<T>,
}

impl<T: Real> PTSeedRecipe<T> {
    /// Arbitrary `A`, `B`.
    pub fn general(
        p: PTParams<T>,
        epsilon: Cx<T>,
        a_weight: Cx<T>,
        b_weight: Cx<T>,
    ) -> Result<Self> {
        let a_coef = a_coefficient(p, epsilon);
        let b_coef = if b_weight.is_zero() {
            b_coefficient(p, epsilon).unwrap_or(Cx::zero())
        } else {
            b_coefficient(p, epsilon)?
        };
        Ok(Self {
            epsilon,
            a_weight,
            b_weight,
            q: None,
            a_coef,
            b_coef,
        })
    }

    /// `A = 1`, `B = 0`: the solution vanishing at `x = 0`.
    pub fn regular_at_origin(p: PTParams<T>, epsilon: Cx<T>) -> Result<Self> {
        Self::general(p, epsilon, Cx::new(T::one(), T::zero()), Cx::zero())
    }

    /// `B = 1`, `A = -b/a + q`. The divergence at `π/2` then has weight `q a`.
    pub fn with_q(p: PTParams<T>, epsilon: T, q: T) -> Result<Self> {
        let (a_coef, b_coef) = pt_ab_coefficients(p, cx(epsilon))?;
        if a_coef.norm() == T::zero() {
            return Err(SusyError::Degenerate(format!(
                "a vanishes at ε = {epsilon} (an eigenvalue); use the A = 1, B = 0 solution"
            )));
        }
        let a_weight = -b_coef / a_coef + q;
        Ok(Self {
            epsilon: cx(epsilon),
            a_weight,
            b_weight: Cx::new(T::one(), T::zero()),
            q: Some(q),
            a_coef,
            b_coef,
        })
    }

    /// Weight of the `cos^{1-ν}` divergence at `π/2`.
    pub fn right_divergence(&self) -> Cx<T> {
        match self.q {
            Some(q) => self.a_coef * q,
            None => self.a_weight * self.a_coef + self.b_weight * self.b_coef,
        }
    }

    fn tags(&self) -> (BoundaryTag, BoundaryTag) {
        let left = if self.b_weight.is_zero() {
            BoundaryTag::Vanishes
        } else {
            BoundaryTag::Diverges
        };
        let scale = (self.a_weight * self.a_coef).norm() + (self.b_weight * self.b_coef).norm();
        let right = if self.right_divergence().norm() <= T::lit(1e-10) * scale || scale == T::zero()
        {
            BoundaryTag::Vanishes
        } else {
            BoundaryTag::Diverges
        };
        (left, right)
    }
}

/// Pointwise evaluator of the general solution and its derivative.
#[derive(Debug, Clone)]
pub struct PTSolution<T> {
    p: PTParams<T>,
    recipe: PTSeedRecipe<T>,
    f1: Hyp2F1<T>,
    df1: (Cx<T>, Hyp2F1<T>),
    f2: Option<(Hyp2F1<T>, (Cx<T>, Hyp2F1<T>))>,
    right: Option<RightBasis<T>>,
}

/// The solution expanded in the pair regular (`cos^ν`) and irregular
/// (`cos^{1-ν}`) at `π/2`, used for `x > π/4`. Evaluating the `x = 0` pair
/// there goes through the `1 - x` connection formula term by term, which loses
/// the small divergence weight of a `q` seed to cancellation.
#[derive(Debug, Clone)]
struct RightBasis<T> {
    c_reg: Cx<T>,
    c_irr: Cx<T>,
    reg: (Hyp2F1<T>, (Cx<T>, Hyp2F1<T>)),
    irr: (Hyp2F1<T>, (Cx<T>, Hyp2F1<T>)),
}

impl<T: Real> RightBasis<T> {
    fn new(p: PTParams<T>, recipe: &PTSeedRecipe<T>) -> Option<Self> {
        let half = T::lit(0.5);
        let g = cx(half - p.nu);
        if is_gamma_pole(g) || is_gamma_pole(cx(T::lit(1.5) - p.nu)) {
            return None;
        }
        let ([a1, b1, c1], [a2, b2, c2]) = hyp_params(p, recipe.epsilon);
        let conn =
            |a: Cx<T>, b: Cx<T>, c: Cx<T>| gamma(c) * gamma(g) * rgamma(c - a) * rgamma(c - b);
        let mut c_reg = recipe.a_weight * conn(a1, b1, c1);
        if !recipe.b_weight.is_zero() {
            c_reg += recipe.b_weight * conn(a2, b2, c2);
        }
        let reg = Hyp2F1::new(a1, b1, cx(p.nu + half));
        let irr = Hyp2F1::new(c1 - a1, c1 - b1, cx(T::lit(1.5) - p.nu));
        let (dr, di) = (reg.derivative(), irr.derivative());
        Some(Self {
            c_reg,
            c_irr: recipe.right_divergence(),
            reg: (reg, dr),
            irr: (irr, di),
        })
    }

    fn eval(&self, p: PTParams<T>, s: T, c: T) -> (Cx<T>, Cx<T>) {
        let (sigma, comp) = (s * s, c * c);
        let dz = -T::lit(2.0) * s * c;
        let (cot, tan) = (c / s, s / c);
        let s_lam = s.powf(p.lambda);
        let part = |(f, (k, df)): &(Hyp2F1<T>, (Cx<T>, Hyp2F1<T>)), expo: T| {
            let pre = s_lam * c.powf(expo);
            let g = f.eval_with_complement(comp, sigma).value;
            let dg = *k * df.eval_with_complement(comp, sigma).value * dz;
            (g * pre, (g * (p.lambda * cot - expo * tan) + dg) * pre)
        };
        let (ur, dur) = part(&self.reg, p.nu);
        let (ui, dui) = part(&self.irr, T::one() - p.nu);
        (
            self.c_reg * ur + self.c_irr * ui,
            self.c_reg * dur + self.c_irr * dui,
        )
    }
}

impl<T: Real> PTSolution<T> {
    pub fn new(p: PTParams<T>, recipe: PTSeedRecipe<T>) -> Result<Self> {
        let ([a1, b1, c1], [a2, b2, c2]) = hyp_params(p, recipe.epsilon);
        let f1 = Hyp2F1::new(a1, b1, c1);
        let df1 = f1.derivative();
        let f2 = if recipe.b_weight.is_zero() {
            None
        } else {
            if is_gamma_pole(c2) {
                return Err(SusyError::Degenerate(format!(
                    "3/2 - λ = {} is a non-positive integer",
                    c2.re
                )));
            }
            let f = Hyp2F1::new(a2, b2, c2);
            let d = f.derivative();
            Some((f, d))
        };
        let right = RightBasis::new(p, &recipe);
        Ok(Self {
            p,
            recipe,
            f1,
            df1,
            f2,
            right,
        })
    }

    /// `(u(x), u'(x))`.
    pub fn eval(&self, x: T) -> (Cx<T>, Cx<T>) {
        let (s, c) = x.sin_cos();
        let (sigma, comp) = (s * s, c * c);
        if let Some(right) = self.right.as_ref().filter(|_| sigma > T::lit(0.5)) {
            return right.eval(self.p, s, c);
        }
        let ds = T::lit(2.0) * s * c;
        let (lam, nu) = (self.p.lambda, self.p.nu);
        let cot = c / s;
        let tan = s / c;
        let c_nu = c.powf(nu);
        let pre1 = s.powf(lam) * c_nu;
        let g1 = self.f1.eval_with_complement(sigma, comp).value;
        let dg1 = self.df1.0 * self.df1.1.eval_with_complement(sigma, comp).value * ds;
        let mut u = self.recipe.a_weight * pre1 * g1;
        let mut du = self.recipe.a_weight * pre1 * (g1 * (lam * cot - nu * tan) + dg1);
        if let Some((f2, df2)) = &self.f2 {
            let pre2 = s.powf(T::one() - lam) * c_nu;
            let g2 = f2.eval_with_complement(sigma, comp).value;
            let dg2 = df2.0 * df2.1.eval_with_complement(sigma, comp).value * ds;
            u += self.recipe.b_weight * pre2 * g2;
            du += self.recipe.b_weight * pre2 * (g2 * ((T::one() - lam) * cot - nu * tan) + dg2);
        }
        (u, du)
    }
}

/// General solution of the PT Schrödinger equation sampled on `grid`, with
/// analytic derivative, boundary tags and measured node count.
pub fn pt_general_solution<T: Real>(
    p: PTParams<T>,
    recipe: PTSeedRecipe<T>,
    grid: Grid1D<T>,
) -> Result<SeedSolution<T>> {
    let sol = Arc::new(PTSolution::new(p, recipe)?);
    let construction = match recipe.q {
        Some(q) => format!("PT general solution, B = 1, A = -b/a + q, q = {q}"),
        None => format!(
            "PT general solution, A = {}, B = {}",
            recipe.a_weight, recipe.b_weight
        ),
    };
    Ok(SeedSolution::from_evaluator(
        recipe.epsilon,
        grid,
        recipe.tags(),
        construction,
        move |x| sol.eval(x),
    ))
}

/// Prediction for the node count of the `B = 1, A = -b/a + q` solution:
/// `i` for `q > 0` and `i + 1` for `q < 0`, `i` being the number of
/// eigenvalues below `ε`.
pub fn pt_node_prediction<T: Real>(p: PTParams<T>, epsilon: T, q: T) -> usize {
    let i = (0..).take_while(|&n| pt_eigenvalue(p, n) < epsilon).count();
    if q > T::zero() {
        i
    } else {
        i + 1
    }
}

/// Eigenfunction `ψ_n ∝ sin^λ cos^ν ₂F₁(-n, n + μ; λ + 1/2; sin²x)` as a seed,
/// unnormalized.
pub fn pt_eigen_seed<T: Real>(
    p: PTParams<T>,
    n: usize,
    grid: Grid1D<T>,
) -> Result<SeedSolution<T>> {
    let f = Hyp2F1::new(
        cx(-T::from_usize_lossy(n)),
        cx(T::from_usize_lossy(n) + p.mu()),
        cx(p.lambda + T::lit(0.5)),
    );
    let df = f.derivative();
    let (lam, nu) = (p.lambda, p.nu);
    let eval = move |x: T| {
        let (s, c) = x.sin_cos();
        let sigma = s * s;
        let pre = s.powf(lam) * c.powf(nu);
        let g = f.eval(sigma).value;
        let dg = df.0 * df.1.eval(sigma).value * T::lit(2.0) * s * c;
        (g * pre, (g * (lam * c / s - nu * s / c) + dg) * pre)
    };
    let mut seed = SeedSolution::from_evaluator(
        cx(pt_eigenvalue(p, n)),
        grid,
        (BoundaryTag::Vanishes, BoundaryTag::Vanishes),
        format!("PT eigenfunction n = {n}"),
        eval,
    );
    seed.u = seed.u.into_real();
    Ok(seed)
}

/// Normalized eigenfunction `ψ_n` (numeric normalization).
pub fn pt_normalized_eigenfunction<T: Real>(
    p: PTParams<T>,
    n: usize,
    grid: Grid1D<T>,
) -> Result<SampledFunction<T>> {
    let mut psi = pt_eigen_seed(p, n, grid)?.u;
    normalize(&mut psi);
    Ok(psi)
}

/// Confluent `w(x) = w0 + ∫_0^x u²` for the `A = 1, B = 0` solution at energy
/// `ε`, summed from its hypergeometric series where `sin²x` does not exceed
/// [`CONFLUENT_SERIES_LIMIT`] and continued by quadrature of `u²` beyond.
/// Derivatives hold `u²`.
pub fn pt_confluent_w<T: Real>(
    p: PTParams<T>,
    epsilon: T,
    w0: T,
    grid: Grid1D<T>,
) -> Result<SampledFunction<T>> {
    let recipe = PTSeedRecipe::regular_at_origin(p, cx(epsilon))?;
    let sol = PTSolution::new(p, recipe)?;
    let u2 = |x: T| sol.eval(x).0.re.powi(2);
    let limit = T::lit(CONFLUENT_SERIES_LIMIT);
    let mut values = Vec::with_capacity(grid.len());
    let mut last_series: Option<usize> = None;
    let mut series = ConfluentSeries::new(p, epsilon);
    for (i, x) in grid.nodes().enumerate() {
        if x.sin().powi(2) > limit {
            break;
        }
        match series.eval(x) {
            Ok(v) => values.push(w0 + v),
            Err(_) => break,
        }
        last_series = Some(i);
    }
    let tol = T::lit(1e-13).max(T::epsilon() * T::lit(10.0));
    match last_series {
        Some(k) if k + 1 < grid.len() => {
            let tail = cumulative_integral(&u2, grid.x(k), &grid, tol);
            for i in k + 1..grid.len() {
                values.push(values[k] + tail[i]);
            }
        }
        None => {
            let all = cumulative_integral(&u2, T::zero(), &grid, tol);
            values.extend(all.into_iter().map(|v| v + w0));
        }
        _ => {}
    }
    let derivs: Vec<Cx<T>> = grid.nodes().map(|x| cx(u2(x))).collect();
    SampledFunction::new(grid, values.into_iter().map(cx).collect(), derivs)
}

/// `Σ_m (α)_m (β)_m sin^{2λ+2m+1} / ((λ+1/2)_m m! (2λ+2m+1)) ₃F₂(...)`.
///
/// The ₃F₂ factor expands to `Σ_j (r-k)_j (r+k)_j σ^j (λ+m+1/2) / ((λ+1/2)_j j! (λ+m+j+1/2))`,
/// so the double sum collapses to `sin^{2λ+1}/2 Σ_n C_n σ^n / (λ+n+1/2)` with
/// `C_n` the Cauchy product of the two coefficient sequences. The `C_n` do not
/// depend on `x` and are extended on demand.
struct ConfluentSeries<T> {
    lambda: T,
    alpha: Cx<T>,
    beta: Cx<T>,
    r_minus: Cx<T>,
    r_plus: Cx<T>,
    c: Cx<T>,
    outer: Vec<Cx<T>>,
    inner: Vec<Cx<T>>,
    cauchy: Vec<Cx<T>>,
}

const CONFLUENT_MAX_TERMS: usize = 20_000;

impl<T: Real> ConfluentSeries<T> {
    fn new(p: PTParams<T>, epsilon: T) -> Self {
        let half = T::lit(0.5);
        let k = csqrt(cx(epsilon * half));
        let r = cx((T::one() + p.lambda - p.nu) * half);
        let one = Cx::new(T::one(), T::zero());
        Self {
            lambda: p.lambda,
            alpha: cx(p.mu() * half) + k,
            beta: cx(p.mu() * half) - k,
            r_minus: r - k,
            r_plus: r + k,
            c: cx(p.lambda + half),
            outer: vec![one],
            inner: vec![one],
            cauchy: vec![one],
        }
    }

    fn extend(&mut self) {
        let m = self.outer.len();
        let mf = T::from_usize_lossy(m - 1);
        let denom = (self.c + mf) * (mf + T::one());
        let last = self.outer[m - 1];
        self.outer
            .push(last * (self.alpha + mf) * (self.beta + mf) / denom);
        let last = self.inner[m - 1];
        self.inner
            .push(last * (self.r_minus + mf) * (self.r_plus + mf) / denom);
        let n = self.cauchy.len();
        let cn = (0..=n).fold(Cx::zero(), |acc, m| acc + self.outer[m] * self.inner[n - m]);
        self.cauchy.push(cn);
    }

    fn eval(&mut self, x: T) -> Result<T> {
        let s = x.sin();
        let sigma = s * s;
        let tail_tol = T::lit(1e-12).max(T::epsilon() * T::lit(10.0));
        let half = T::lit(0.5);
        let mut total = Cx::<T>::zero();
        let mut power = T::one();
        let mut small = 0;
        for n in 0..CONFLUENT_MAX_TERMS {
            if n == self.cauchy.len() {
                self.extend();
            }
            let term = self.cauchy[n] * power / (self.lambda + T::from_usize_lossy(n) + half);
            total += term;
            if term.norm() <= tail_tol * total.norm() {
                small += 1;
                if small >= 3 {
                    return Ok(total.re * s.powf(T::lit(2.0) * self.lambda + T::one()) * half);
                }
            } else {
                small = 0;
            }
            power *= sigma;
        }
        Err(SusyError::NoConvergence(format!(
            "confluent w series at x = {x}"
        )))
    }
}

/// `∫ |u|²` of a sampled function by composite Simpson.
pub fn sampled_norm_squared<T: Real>(u: &SampledFunction<T>) -> T {
    let sq: Vec<T> = u.values.iter().map(|v| v.norm_sqr()).collect();
    simpson(&sq, u.grid.spacing())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::calculus::{count_nodes, default_margin, inner_product};
    use crate::numerics::ode::integrate_schrodinger;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_2;

    fn p34() -> PTParams<f64> {
        PTParams::new(3.0, 4.0).unwrap()
    }

    #[test]
    fn potential_values() {
        let p = p34();
        assert_relative_eq!(
            pt_potential(p, std::f64::consts::FRAC_PI_4),
            18.0,
            max_relative = 1e-14
        );
        let sym = PTParams::new(2.5, 2.5).unwrap();
        for &x in &[0.1, 0.4, 0.7] {
            assert_relative_eq!(
                pt_potential(sym, x),
                pt_potential(sym, std::f64::consts::FRAC_PI_2 - x),
                max_relative = 1e-12
            );
        }
        let g = pt_grid::<f64>(DEFAULT_POINTS).unwrap();
        let vmin = g
            .nodes()
            .map(|x| pt_potential(p, x))
            .fold(f64::INFINITY, f64::min);
        assert!(vmin < pt_eigenvalue(p, 0));
        assert!(PTParams::new(0.5, 4.0).is_err());
    }

    #[test]
    fn spectrum_formula() {
        let p = p34();
        assert_eq!(pt_eigenvalue(p, 0), 24.5);
        let p58 = PTParams::new(5.0, 8.0).unwrap();
        assert_eq!(pt_eigenvalue(p58, 2), 144.5);
        assert_eq!(pt_eigenvalue(p58, 3), 180.5);
        for n in 0..5 {
            let gap = pt_eigenvalue(p, n + 1) - pt_eigenvalue(p, n);
            assert_relative_eq!(
                gap,
                4.0 * n as f64 + 2.0 * p.mu() + 2.0,
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn ab_coefficients_real_below_ground_and_vanishing_at_levels() {
        let p = p34();
        let (a, b) = pt_ab_coefficients(p, cx(19.0)).unwrap();
        assert!(a.im.abs() < 1e-14 * a.norm() && b.im.abs() < 1e-14 * b.norm());
        let (a, _) = pt_ab_coefficients(p, cx(pt_eigenvalue(p, 1))).unwrap();
        assert_eq!(a.norm(), 0.0);
        let half_int = PTParams::new(2.5, 4.0).unwrap();
        assert!(matches!(
            pt_ab_coefficients(half_int, cx(10.0)),
            Err(SusyError::Degenerate(_))
        ));
    }

    #[test]
    fn general_solution_solves_the_equation() {
        let p = p34();
        let g = pt_grid(DEFAULT_POINTS).unwrap();
        let m = pt_model(p, g).unwrap();
        for recipe in [
            PTSeedRecipe::regular_at_origin(p, cx(19.0)).unwrap(),
            PTSeedRecipe::with_q(p, 19.0, 1.0).unwrap(),
            PTSeedRecipe::with_q(p, 50.0, -0.3).unwrap(),
        ] {
            let seed = pt_general_solution(p, recipe, g).unwrap();
            let r = seed.residual(&m);
            assert!(r < 1e-7, "residual {r:e} for {recipe:?}");
        }
    }

    #[test]
    fn general_solution_agrees_with_direct_integration() {
        let p = p34();
        let g = pt_grid(DEFAULT_POINTS).unwrap();
        let m = pt_model(p, g).unwrap();
        let seed = pt_general_solution(p, PTSeedRecipe::with_q(p, 19.0, 1.0).unwrap(), g).unwrap();
        let i0 = g.len() / 2;
        let (u0, du0) = seed.value(g.x(i0));
        let run = integrate_schrodinger(&m.v, seed.epsilon, g.x(i0), u0, du0, &g).unwrap();
        let mut worst = 0.0_f64;
        for (i, x) in g.nodes().enumerate() {
            if !(0.05..=FRAC_PI_2 - 0.05).contains(&x) {
                continue;
            }
            let u = seed.u.values[i];
            worst = worst
                .max((run.u.values[i] - u).norm() / u.norm().max(1e-3 * seed.u.values[i0].norm()));
        }
        assert!(worst < 1e-7, "relative deviation {worst:e}");
    }

    #[test]
    fn boundary_tags_from_weights() {
        let p = p34();
        let g = pt_grid(501).unwrap();
        let reg = pt_general_solution(p, PTSeedRecipe::regular_at_origin(p, cx(19.0)).unwrap(), g)
            .unwrap();
        assert_eq!(
            reg.boundary_tags,
            (BoundaryTag::Vanishes, BoundaryTag::Diverges)
        );
        let q = pt_general_solution(p, PTSeedRecipe::with_q(p, 19.0, 0.5).unwrap(), g).unwrap();
        assert_eq!(
            q.boundary_tags,
            (BoundaryTag::Diverges, BoundaryTag::Diverges)
        );
        let eig = pt_general_solution(
            p,
            PTSeedRecipe::regular_at_origin(p, cx(pt_eigenvalue(p, 2))).unwrap(),
            g,
        )
        .unwrap();
        assert_eq!(
            eig.boundary_tags,
            (BoundaryTag::Vanishes, BoundaryTag::Vanishes)
        );
    }

    #[test]
    fn node_rule_below_ground_state() {
        let p = p34();
        let g = pt_grid(DEFAULT_POINTS).unwrap();
        for (q, expected) in [(0.7, 0), (-0.7, 1)] {
            let s = pt_general_solution(p, PTSeedRecipe::with_q(p, 19.0, q).unwrap(), g).unwrap();
            assert_eq!(s.node_count, expected);
            assert_eq!(pt_node_prediction(p, 19.0, q), expected);
        }
        assert_eq!(pt_node_prediction(p, 60.0, -1.0), 3);
    }

    #[test]
    fn eigen_seeds_match_general_solution() {
        let p = p34();
        let g = pt_grid(DEFAULT_POINTS).unwrap();
        for n in 0..4 {
            let psi = pt_normalized_eigenfunction(p, n, g).unwrap();
            let u = pt_general_solution(
                p,
                PTSeedRecipe::regular_at_origin(p, cx(pt_eigenvalue(p, n))).unwrap(),
                g,
            )
            .unwrap()
            .u;
            let overlap = inner_product(&u, &psi).norm() / sampled_norm_squared(&u).sqrt();
            assert!(overlap >= 1.0 - 1e-8, "n = {n}: {overlap}");
        }
    }

    #[test]
    fn orthonormal_eigenfunctions() {
        let p = p34();
        let g = pt_grid(DEFAULT_POINTS).unwrap();
        let m = pt_model(p, g).unwrap();
        let psis: Vec<_> = (0..5)
            .map(|n| pt_normalized_eigenfunction(p, n, g).unwrap())
            .collect();
        for (i, a) in psis.iter().enumerate() {
            assert_eq!(count_nodes(a, default_margin(&g)), i);
            assert!(crate::model::schrodinger_residual(&m, cx(pt_eigenvalue(p, i)), a) < 1e-7);
            for (j, b) in psis.iter().enumerate() {
                let ip = inner_product(a, b).re;
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((ip - expected).abs() < 1e-8, "<{i}|{j}> = {ip}");
            }
        }
    }

    #[test]
    fn confluent_w_series_against_quadrature() {
        let p = PTParams::new(5.0, 8.0).unwrap();
        let g = pt_grid(DEFAULT_POINTS).unwrap();
        let w = pt_confluent_w(p, 147.92, 0.0, g).unwrap();
        let sol =
            PTSolution::new(p, PTSeedRecipe::regular_at_origin(p, cx(147.92)).unwrap()).unwrap();
        let quad = cumulative_integral(&|x: f64| sol.eval(x).0.re.powi(2), 0.0, &g, 1e-14);
        let mut worst = 0.0_f64;
        for (i, x) in g.nodes().enumerate() {
            if x.sin().powi(2) <= CONFLUENT_SERIES_LIMIT {
                worst = worst.max((w.values[i].re - quad[i]).abs() / quad[i].abs().max(1e-300));
            }
        }
        assert!(worst <= 1e-6, "relative deviation {worst:e}");
        assert!(w.values.windows(2).all(|v| v[1].re >= v[0].re));
        let shifted = pt_confluent_w(p, 147.92, 2.0, g).unwrap();
        assert_relative_eq!(
            shifted.values[0].re - w.values[0].re,
            2.0,
            max_relative = 1e-12
        );
    }
}
