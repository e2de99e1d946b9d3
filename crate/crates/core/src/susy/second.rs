//! Second-order transformations `V2 = V0 - η'`, `η = w'/w`.
//!
//! `w` is the Wronskian of two seeds (real case), `w0 + ∫u²` (confluent case)
//! or `W(u, ū) / (2 (ε - ε̄))` (complex case). Each is represented by its jet
//! `(w, w', w'', w''')`, formed pointwise from the seed evaluators.

use std::fmt;
use std::sync::Arc;

use super::{
    assemble, new_state, on_model_grid, require_nodeless, EtaJet, PartnerResult, SpectralChange,
    Stage, TransformCase,
};
use crate::error::{Result, SusyError};
use crate::model::{BoundaryTag, DomainKind, Jet, PotentialFn, PotentialModel, SeedSolution};
use crate::numerics::calculus::{
    cumulative_integral, default_margin, first_sign_change, gauss_legendre_8,
    gauss_legendre_adaptive,
};
use crate::numerics::grid::{Grid1D, SampledFunction};
use crate::scalar::{csqrt, cx, Cx, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecondOrderCase {
    Real,
    Confluent,
    Complex,
}

impl fmt::Display for SecondOrderCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SecondOrderCase::Real => "real",
            SecondOrderCase::Confluent => "confluent",
            SecondOrderCase::Complex => "complex",
        })
    }
}

/// Ansatz constants `c`, `d` and the factorization energies
/// `ε₁,₂ = (d ± √c) / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondOrderParams<T> {
    pub c: T,
    pub d: T,
    pub epsilon1: Cx<T>,
    pub epsilon2: Cx<T>,
    pub case: SecondOrderCase,
}

impl<T: Real> SecondOrderParams<T> {
    pub fn from_cd(c: T, d: T) -> Self {
        let half = T::lit(0.5);
        let root = csqrt(cx(c));
        let epsilon1 = (cx(d) + root) * half;
        let epsilon2 = (cx(d) - root) * half;
        let case = if c > T::zero() {
            SecondOrderCase::Real
        } else if c == T::zero() {
            SecondOrderCase::Confluent
        } else {
            SecondOrderCase::Complex
        };
        Self {
            c,
            d,
            epsilon1,
            epsilon2,
            case,
        }
    }

    /// `d = ε₁ + ε₂`, `c = (ε₁ - ε₂)²`. The pair must be real or a complex
    /// conjugate pair.
    pub fn from_epsilons(epsilon1: Cx<T>, epsilon2: Cx<T>) -> Result<Self> {
        let sum = epsilon1 + epsilon2;
        let diff = epsilon1 - epsilon2;
        let scale = T::lit(1e-12) * (T::one() + epsilon1.norm());
        if sum.im.abs() > scale || (epsilon1.im != T::zero() && diff.re.abs() > scale) {
            return Err(SusyError::ParameterBounds(format!(
                "factorization energies {epsilon1}, {epsilon2} are neither real nor a conjugate pair"
            )));
        }
        let c = (diff * diff).re;
        let mut p = Self::from_cd(c, sum.re);
        // keep the caller's labelling of the two energies
        p.epsilon1 = epsilon1;
        p.epsilon2 = epsilon2;
        Ok(p)
    }
}

type WJetFn<T> = Arc<dyn Fn(T) -> [Cx<T>; 4] + Send + Sync>;

fn eta_from_w<T: Real>(w: [Cx<T>; 4]) -> EtaJet<T> {
    let [w0, w1, w2, w3] = w;
    let eta = w1 / w0;
    let d1 = w2 / w0 - eta * eta;
    let d2 = w3 / w0 - eta * w2 / w0 - eta * d1 * T::lit(2.0);
    EtaJet {
        eta: eta.re,
        d1: d1.re,
        d2: d2.re,
        imag: d1.im.abs(),
    }
}

fn stage_from_w<T: Real>(
    v0: &PotentialModel<T>,
    epsilons: (Cx<T>, Cx<T>),
    w: WJetFn<T>,
) -> Stage<T> {
    Stage::new(
        2,
        epsilons,
        v0.evaluator(),
        Arc::new(move |x| eta_from_w(w(x))),
    )
}

fn seed_jet<T: Real>(seed: &SeedSolution<T>, v: &PotentialFn<T>, x: T) -> Jet<T> {
    let (u, du) = seed.value(x);
    let (vx, dvx) = v(x);
    Jet::schrodinger(u, du, seed.epsilon, vx, dvx)
}

/// Jet of `s · W(u1, u2)` with `W' = 2 (ε1 - ε2) u1 u2`.
fn wronskian_jet<T: Real>(
    v0: &PotentialModel<T>,
    s1: &SeedSolution<T>,
    s2: &SeedSolution<T>,
    scale: Cx<T>,
) -> WJetFn<T> {
    let v = v0.evaluator();
    let (s1, s2) = (s1.clone(), s2.clone());
    let k = (s1.epsilon - s2.epsilon) * T::lit(2.0) * scale;
    Arc::new(move |x| {
        let a = seed_jet(&s1, &v, x);
        let b = seed_jet(&s2, &v, x);
        [
            (a.f * b.d1 - a.d1 * b.f) * scale,
            k * a.f * b.f,
            k * (a.d1 * b.f + a.f * b.d1),
            k * (a.d2 * b.f + a.d1 * b.d1 * T::lit(2.0) + a.f * b.d2),
        ]
    })
}

fn physical(seed: &SeedSolution<impl Real>) -> bool {
    seed.boundary_tags == (BoundaryTag::Vanishes, BoundaryTag::Vanishes)
}

fn w_samples<T: Real>(grid: &Grid1D<T>, w: &WJetFn<T>) -> Vec<T> {
    grid.nodes().map(|x| w(x)[0].re).collect()
}

/// Partner from two real seeds at distinct energies.
pub fn second_order_real<T: Real>(
    v0: &PotentialModel<T>,
    seed1: &SeedSolution<T>,
    seed2: &SeedSolution<T>,
) -> Result<PartnerResult<T>> {
    if !seed1.is_real() || !seed2.is_real() {
        return Err(SusyError::ParameterBounds(
            "the real case needs real seeds at real energies".into(),
        ));
    }
    let params = SecondOrderParams::from_epsilons(seed1.epsilon, seed2.epsilon)?;
    if params.c <= T::zero() {
        return Err(SusyError::ParameterBounds(format!(
            "ε₁ = ε₂ = {}; use the confluent transformation",
            seed1.epsilon.re
        )));
    }
    let (s1, s2) = (on_model_grid(v0, seed1), on_model_grid(v0, seed2));
    let grid = *v0.grid();
    let w = wronskian_jet(v0, &s1, &s2, cx(T::one()));
    require_nodeless(&grid, &w_samples(&grid, &w), "Wronskian W(u1, u2)")?;
    let (e1, e2) = (s1.epsilon.re, s2.epsilon.re);
    let stage = stage_from_w(v0, (s1.epsilon, s2.epsilon), w.clone());
    let (potential, superpotential, imag_residue) = assemble(
        v0,
        &stage,
        format!(
            "second-order partner of {} at ε₁ = {e1}, ε₂ = {e2}",
            v0.label
        ),
    )?;

    let state_of = |other: &SeedSolution<T>, energy: Cx<T>| {
        let (o, w) = (other.clone(), w.clone());
        new_state(&potential, energy, move |x| {
            let (u, du) = o.value(x);
            let j = w(x);
            (u / j[0], (du * j[0] - u * j[1]) / (j[0] * j[0]))
        })
    };
    let n1 = state_of(&s2, s1.epsilon);
    let n2 = state_of(&s1, s2.epsilon);

    let mut deleted = Vec::new();
    let mut created = Vec::new();
    for (seed, state, e) in [(&s1, &n1, e1), (&s2, &n2, e2)] {
        match (physical(seed), state.normalizable) {
            (true, false) => deleted.push(e),
            (false, true) => created.push(e),
            _ => {}
        }
    }
    let sorted = |mut v: Vec<T>| {
        v.sort_by(|a, b| a.partial_cmp(b).expect("finite energies"));
        v
    };
    let (deleted, created) = (sorted(deleted), sorted(created));
    let spectral_change = match (deleted.as_slice(), created.as_slice()) {
        ([a, b], []) => SpectralChange::DeleteTwo(*a, *b),
        ([], [a, b]) => SpectralChange::CreateTwo(*a, *b),
        ([a], [b]) => SpectralChange::MoveLevel { from: *a, to: *b },
        ([a], []) => SpectralChange::DeleteOne(*a),
        ([], [a]) => SpectralChange::CreateLevel(*a),
        _ => SpectralChange::Isospectral,
    };
    Ok(PartnerResult {
        potential,
        order: 2,
        case: TransformCase::Second(SecondOrderCase::Real),
        spectral_change,
        new_states: vec![n1, n2],
        superpotential,
        imag_residue,
        warnings: Vec::new(),
        stages: vec![stage],
    })
}

/// `∫_{x0}^{x} u²` at every node. `x0` may lie outside the grid, or be
/// infinite; the part beyond the grid is then closed with the exponential
/// tail `u² / (2 |u'/u|)` of the seed at the last node.
fn integral_from<T: Real>(seed: &SeedSolution<T>, x0: T, grid: &Grid1D<T>, tol: T) -> Vec<T> {
    let u = seed.evaluator();
    let f = move |x: T| u(x).0.re.powi(2);
    let tail = |x: T| {
        let (a, b) = seed.value(x);
        let k = (b.re / a.re).abs();
        if k > T::zero() {
            a.re * a.re / (T::lit(2.0) * k)
        } else {
            T::zero()
        }
    };
    let n = grid.len();
    if x0 == T::neg_infinity() {
        let base = cumulative_integral(&f, grid.x_min(), grid, tol);
        let t = tail(grid.x_min());
        return base.into_iter().map(|v| v + t).collect();
    }
    let start = x0.min(grid.x_min());
    let base = cumulative_integral(&f, start, grid, tol);
    let offset = if x0 == T::infinity() {
        base[n - 1] + tail(grid.x_max())
    } else if x0 <= grid.x_min() {
        T::zero()
    } else {
        let j = grid.nearest_index(x0);
        base[j] + gauss_legendre_adaptive(&f, grid.x(j), x0, tol)
    };
    base.into_iter().map(|v| v - offset).collect()
}

const QUADRATURE_TOL: f64 = 1e-13;

/// Confluent partner from one real seed with `w = w0 + ∫_{x0}^x u²`.
/// On unbounded domains `x0` may be `±∞`.
pub fn second_order_confluent<T: Real>(
    v0: &PotentialModel<T>,
    seed: &SeedSolution<T>,
    w0: T,
    x0: T,
) -> Result<PartnerResult<T>> {
    if !seed.is_real() {
        return Err(SusyError::ParameterBounds(
            "the confluent case needs a real seed".into(),
        ));
    }
    let s = on_model_grid(v0, seed);
    let grid = *v0.grid();
    let eps = s.epsilon.re;
    let integral = integral_from(&s, x0, &grid, T::lit(QUADRATURE_TOL));
    let nodes: Arc<Vec<T>> = Arc::new(integral.iter().map(|&v| v + w0).collect());

    if let Some(x) = first_sign_change(&grid, &nodes, default_margin(&grid)) {
        let n = grid.len();
        let below = -integral[0];
        let above = integral[n - 1];
        return Err(SusyError::SingularConfluent {
            location: x.to_f64_lossy(),
            admissible: format!(
                "w0 ≥ {:.6e} or w0 ≤ {:.6e}",
                below.to_f64_lossy(),
                -above.to_f64_lossy()
            ),
        });
    }

    let v = v0.evaluator();
    let table = nodes.clone();
    let seed_c = s.clone();
    let w: WJetFn<T> = Arc::new(move |x| {
        let j = grid.nearest_index(x);
        let u2 = |y: T| seed_c.value(y).0.re.powi(2);
        let wx = table[j] + gauss_legendre_8(u2, grid.x(j), x);
        let a = seed_jet(&seed_c, &v, x);
        let two = T::lit(2.0);
        [
            cx(wx),
            a.f * a.f,
            a.f * a.d1 * two,
            (a.d1 * a.d1 + a.f * a.d2) * two,
        ]
    });
    let stage = stage_from_w(v0, (s.epsilon, s.epsilon), w.clone());
    let (potential, superpotential, imag_residue) = assemble(
        v0,
        &stage,
        format!("confluent partner of {} at ε = {eps}, w0 = {w0}", v0.label),
    )?;
    let ws = w.clone();
    let seed_e = s.evaluator();
    let state = new_state(&potential, s.epsilon, move |x| {
        let (u, du) = seed_e(x);
        let j = ws(x);
        (u / j[0], du / j[0] - u * j[1] / (j[0] * j[0]))
    });
    let spectral_change = match (physical(&s), state.normalizable) {
        (true, true) => SpectralChange::Isospectral,
        (true, false) => SpectralChange::DeleteOne(eps),
        (false, true) => SpectralChange::CreateLevel(eps),
        (false, false) => SpectralChange::Isospectral,
    };
    Ok(PartnerResult {
        potential,
        order: 2,
        case: TransformCase::Second(SecondOrderCase::Confluent),
        spectral_change,
        new_states: vec![state],
        superpotential,
        imag_residue,
        warnings: Vec::new(),
        stages: vec![stage],
    })
}

/// Partner from a complex seed and its conjugate, `w = W(u, ū) / (2 (ε - ε̄))`.
pub fn second_order_complex<T: Real>(
    v0: &PotentialModel<T>,
    seed: &SeedSolution<T>,
) -> Result<PartnerResult<T>> {
    if seed.epsilon.im == T::zero() {
        return Err(SusyError::ParameterBounds(format!(
            "the complex case needs Im ε ≠ 0, got ε = {}",
            seed.epsilon
        )));
    }
    let s = on_model_grid(v0, seed);
    let conj = s.conjugate();
    let grid = *v0.grid();
    let scale = ((s.epsilon - conj.epsilon) * T::lit(2.0)).inv();
    let w = wronskian_jet(v0, &s, &conj, scale);
    require_nodeless(&grid, &w_samples(&grid, &w), "w = W(u, ū)/(2(ε - ε̄))")?;
    let stage = stage_from_w(v0, (s.epsilon, conj.epsilon), w.clone());
    let (potential, superpotential, imag_residue) = assemble(
        v0,
        &stage,
        format!(
            "complex second-order partner of {} at ε = {}",
            v0.label, s.epsilon
        ),
    )?;
    let states = [(&conj, s.epsilon), (&s, conj.epsilon)]
        .into_iter()
        .map(|(other, energy)| {
            let (o, w) = (other.clone(), w.clone());
            // the Wronskian scale cancels in η but not in the states
            let k = scale;
            new_state(&potential, energy, move |x| {
                let (u, du) = o.value(x);
                let j = w(x);
                let (w0, w1) = (j[0] / k, j[1] / k);
                (u / w0, (du * w0 - u * w1) / (w0 * w0))
            })
        })
        .collect();
    Ok(PartnerResult {
        potential,
        order: 2,
        case: TransformCase::Second(SecondOrderCase::Complex),
        spectral_change: SpectralChange::Isospectral,
        new_states: states,
        superpotential,
        imag_residue,
        warnings: Vec::new(),
        stages: vec![stage],
    })
}

/// `B2⁺ψ / √((E - ε₁)(E - ε₂))`, normalized, through every stage of the
/// partner.
pub fn map_eigenfunction_second<T: Real>(
    psi: &SampledFunction<T>,
    energy: T,
    partner: &PartnerResult<T>,
) -> Result<SampledFunction<T>> {
    partner.map_eigenfunction(psi, energy)
}

/// Solution of the model's equation at `epsilon` that vanishes at the left
/// end, integrated on a grid `refine` times finer than the model's.
///
/// Finite ends start from the leading Frobenius behaviour `t^s` fitted to
/// `V ≈ g / (2 t²)`; unbounded ends from the decaying exponential.
pub fn left_regular_seed<T: Real>(
    model: &PotentialModel<T>,
    epsilon: T,
    refine: usize,
) -> Result<SeedSolution<T>> {
    let g = *model.grid();
    let fine = Grid1D::new(g.x_min(), g.x_max(), (g.len() - 1) * refine.max(1) + 1)?;
    let fine_model = model.resampled(fine)?;
    let x = fine.x(0);
    let two = T::lit(2.0);
    let du0 = match model.domain {
        DomainKind::FiniteInterval { left, .. } => {
            let t = x - left;
            let (v1, v2) = (model.value(left + t).0, model.value(left + two * t).0);
            let gfit = (T::lit(8.0) * t * t * (v1 - v2) / T::lit(3.0)).max(T::zero());
            let s = (T::one() + (T::one() + T::lit(4.0) * gfit).sqrt()) / two;
            s / t
        }
        _ => (two * (model.value(x).0 - epsilon)).max(T::zero()).sqrt(),
    };
    let tags = (BoundaryTag::Vanishes, BoundaryTag::Diverges);
    let fine_seed = SeedSolution::integrate(
        &fine_model,
        epsilon,
        0,
        T::one(),
        du0,
        tags,
        format!("numeric left-regular seed at ε = {epsilon}"),
    )?;
    Ok(fine_seed.resampled(g))
}

/// Moves the level `E_n` of `v0` (seeded by its eigenfunction) to `to`:
/// a confluent deletion (`w0 = 0` at the left end) followed by a confluent
/// creation at `to` on the intermediate partner, seeded numerically.
pub fn move_level<T: Real>(
    v0: &PotentialModel<T>,
    eigen_seed: &SeedSolution<T>,
    to: T,
) -> Result<PartnerResult<T>> {
    let from = eigen_seed.epsilon.re;
    let left = match v0.domain {
        DomainKind::FiniteInterval { left, .. } => left,
        _ => T::neg_infinity(),
    };
    let first = second_order_confluent(v0, eigen_seed, T::zero(), left)?;
    if first.spectral_change != SpectralChange::DeleteOne(from) {
        return Err(SusyError::InconsistentSeed(format!(
            "the seed at ε = {from} did not delete its level (got {})",
            first.spectral_change
        )));
    }
    let mid = &first.potential;
    let mut seed = left_regular_seed(mid, to, 8)?;
    // scale so that w0 = 1 is comparable to ∫u² over the left half
    let g = *mid.grid();
    let half = g.x(g.len() / 2);
    let u = seed.evaluator();
    let weight = gauss_legendre_adaptive(
        &|x: T| u(x).0.re.powi(2),
        left.max(g.x_min()),
        half,
        T::lit(1e-10),
    );
    let k = weight.sqrt().recip();
    seed = SeedSolution::combine(
        k,
        &seed,
        T::zero(),
        &seed,
        seed.boundary_tags,
        seed.construction.clone(),
    )?;
    let second = second_order_confluent(mid, &seed, T::one(), left)?;
    if second.spectral_change != SpectralChange::CreateLevel(to) {
        return Err(SusyError::InconsistentSeed(format!(
            "the level at ε = {to} was not created (got {})",
            second.spectral_change
        )));
    }
    let superpotential = SampledFunction::new(
        g,
        first
            .superpotential
            .values
            .iter()
            .zip(&second.superpotential.values)
            .map(|(a, b)| a + b)
            .collect(),
        first
            .superpotential
            .derivatives
            .iter()
            .zip(&second.superpotential.derivatives)
            .map(|(a, b)| a + b)
            .collect(),
    )?;
    let mut stages = first.stages;
    stages.extend(second.stages);
    let mut potential = second.potential;
    potential.label = format!("{} with level {from} moved to {to}", v0.label);
    Ok(PartnerResult {
        potential,
        order: 4,
        case: TransformCase::Composite,
        spectral_change: SpectralChange::MoveLevel { from, to },
        new_states: second.new_states,
        superpotential,
        imag_residue: first.imag_residue.max(second.imag_residue),
        warnings: first.warnings.into_iter().chain(second.warnings).collect(),
        stages,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::shooting::{Shooter, ShootingEnd, ShootingOptions};
    use crate::susy::verify_intertwining;
    use approx::assert_relative_eq;

    fn oscillator() -> PotentialModel<f64> {
        let g = Grid1D::new(-8.0, 8.0, 2001).unwrap();
        PotentialModel::new("oscillator", DomainKind::WholeLine, g, |x: f64| {
            (x * x / 2.0, x)
        })
        .unwrap()
        .with_spectrum(|n| n as f64 + 0.5)
        .unwrap()
    }

    fn hermite_seed(m: &PotentialModel<f64>, n: usize) -> SeedSolution<f64> {
        let tags = (BoundaryTag::Vanishes, BoundaryTag::Vanishes);
        SeedSolution::from_evaluator(
            cx(n as f64 + 0.5),
            *m.grid(),
            tags,
            format!("ψ{n}"),
            move |x: f64| {
                let e = (-x * x / 2.0).exp();
                match n {
                    0 => (cx(e), cx(-x * e)),
                    1 => (cx(x * e), cx((1.0 - x * x) * e)),
                    _ => (
                        cx((2.0 * x * x - 1.0) * e),
                        cx((5.0 * x - 2.0 * x * x * x) * e),
                    ),
                }
            },
        )
    }

    fn levels(m: &PotentialModel<f64>, count: usize) -> Vec<f64> {
        let v = m.evaluator();
        let s = Shooter::new(
            move |x| v(x).0,
            ShootingEnd::Dirichlet { position: -7.5 },
            ShootingEnd::Dirichlet { position: 7.5 },
            ShootingOptions::default(),
        )
        .unwrap();
        s.lowest(count).unwrap()
    }

    #[test]
    fn params_round_trip() {
        let p = SecondOrderParams::from_cd(4.0_f64, 2.0);
        assert_eq!(
            (p.epsilon1, p.epsilon2, p.case),
            (cx(2.0), cx(0.0), SecondOrderCase::Real)
        );
        let q = SecondOrderParams::from_cd(-4.0_f64, 2.0);
        assert_eq!(q.case, SecondOrderCase::Complex);
        assert_relative_eq!(q.epsilon1.im, 1.0);
        assert_eq!(q.epsilon2, q.epsilon1.conj());
        let r = SecondOrderParams::from_epsilons(q.epsilon1, q.epsilon2).unwrap();
        assert_relative_eq!(r.c, -4.0, epsilon = 1e-14);
        assert_relative_eq!(r.d, 2.0, epsilon = 1e-14);
        assert!(SecondOrderParams::from_epsilons(Cx::new(1.0, 1.0), Cx::new(2.0, -1.0)).is_err());
    }

    #[test]
    fn deleting_the_two_lowest_oscillator_levels() {
        let m = oscillator();
        let p = second_order_real(&m, &hermite_seed(&m, 0), &hermite_seed(&m, 1)).unwrap();
        assert_eq!(p.spectral_change, SpectralChange::DeleteTwo(0.5, 1.5));
        for (i, x) in m.grid().nodes().enumerate() {
            assert!(
                (p.v_new().values[i].re - (x * x / 2.0 + 2.0)).abs() < 1e-9,
                "x = {x}"
            );
        }
        // the kernel of B2⁺ is spanned by the seeds
        let stage = &p.stages[0];
        for n in 0..2 {
            let s = hermite_seed(&m, n);
            for x in [-2.0, -0.3, 0.7, 1.9] {
                let (u, du) = s.value(x);
                assert!(stage.apply(x, s.epsilon, u, du).0.norm() < 1e-12);
            }
        }
        let r = verify_intertwining(&m, &p, &[0.2, 2.5, 3.1]).unwrap();
        assert!(r < 1e-6, "intertwining residual {r:e}");
    }

    #[test]
    fn mapped_states_are_orthonormal_eigenfunctions() {
        let m = oscillator();
        let p = second_order_real(&m, &hermite_seed(&m, 0), &hermite_seed(&m, 1)).unwrap();
        let psi2 = hermite_seed(&m, 2).u;
        let mapped = map_eigenfunction_second(&psi2, 2.5, &p).unwrap();
        // V2 = V0 + 2, so ψ2 of V0 maps onto the ground state at 2.5
        let target = hermite_seed(&m, 0).u;
        let overlap = crate::numerics::calculus::inner_product(&mapped, &target).norm()
            / crate::numerics::calculus::norm_squared(&target).sqrt();
        assert_relative_eq!(overlap, 1.0, epsilon = 1e-9);
        assert!(matches!(
            map_eigenfunction_second(&psi2, 1.5, &p),
            Err(SusyError::CoincidentEnergy(_))
        ));
    }

    #[test]
    fn confluent_deletion_and_isospectral_shift() {
        let m = oscillator();
        let seed = hermite_seed(&m, 0);
        let del = second_order_confluent(&m, &seed, 0.0, f64::NEG_INFINITY).unwrap();
        assert_eq!(del.spectral_change, SpectralChange::DeleteOne(0.5));
        let e = levels(&del.potential, 3);
        for (k, &ek) in e.iter().enumerate() {
            assert_relative_eq!(ek, k as f64 + 1.5, max_relative = 1e-6);
        }
        let iso = second_order_confluent(&m, &seed, 0.5, f64::NEG_INFINITY).unwrap();
        assert_eq!(iso.spectral_change, SpectralChange::Isospectral);
        let e = levels(&iso.potential, 3);
        for (k, &ek) in e.iter().enumerate() {
            assert_relative_eq!(ek, k as f64 + 0.5, max_relative = 1e-6);
        }
        let r = verify_intertwining(&m, &iso, &[1.1, 2.0]).unwrap();
        assert!(r < 1e-6, "intertwining residual {r:e}");
    }

    #[test]
    fn confluent_rejects_w0_between_the_bounds() {
        let m = oscillator();
        let seed = hermite_seed(&m, 0);
        match second_order_confluent(&m, &seed, -0.5, 0.0) {
            Err(SusyError::SingularConfluent {
                location,
                admissible,
            }) => {
                assert!(location > 0.0);
                assert!(admissible.contains("w0 ≥ 8.86"), "{admissible}");
            }
            other => panic!("expected a singular confluent transform, got {other:?}"),
        }
    }
}
