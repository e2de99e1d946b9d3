//! First-order transformations `V1 = V0 - α'`, `α = u'/u`.

use std::fmt;
use std::sync::Arc;

use super::{
    assemble, new_state, on_model_grid, require_nodeless, EtaJet, PartnerResult, SpectralChange,
    Stage, TransformCase,
};
use crate::error::{Result, SusyError};
use crate::model::{BoundaryTag, PotentialModel, SeedSolution};
use crate::numerics::calculus::normalize;
use crate::numerics::grid::SampledFunction;
use crate::scalar::{cx, Real};

/// The three situations of a nodeless first-order seed, plus seeds bounded
/// at both ends of an unbounded domain (band edges of periodic potentials).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FirstOrderCase {
    /// (i) `ε = E0`, the seed is the ground state.
    GroundState,
    /// (ii) `ε < E0`, the seed diverges at both ends.
    BothDiverge,
    /// (iii) `ε < E0`, the seed vanishes at exactly one end.
    OneVanishes,
    BoundedSeed,
}

impl fmt::Display for FirstOrderCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FirstOrderCase::GroundState => "(i)",
            FirstOrderCase::BothDiverge => "(ii)",
            FirstOrderCase::OneVanishes => "(iii)",
            FirstOrderCase::BoundedSeed => "bounded-seed",
        })
    }
}

fn same_energy<T: Real>(a: T, b: T) -> bool {
    (a - b).abs() <= T::lit(1e-8) * (T::one() + b.abs())
}

fn classify<T: Real>(seed: &SeedSolution<T>, e0: Option<T>) -> Result<FirstOrderCase> {
    if !seed.is_real() {
        return Err(SusyError::InvalidInput(
            "first-order classification needs a real seed".into(),
        ));
    }
    let eps = seed.epsilon.re;
    let vanishing = [seed.boundary_tags.0, seed.boundary_tags.1]
        .iter()
        .filter(|t| **t == BoundaryTag::Vanishes)
        .count();
    let diverging = [seed.boundary_tags.0, seed.boundary_tags.1]
        .iter()
        .filter(|t| **t == BoundaryTag::Diverges)
        .count();
    match (vanishing, diverging) {
        (2, _) => match e0 {
            Some(e0) if !same_energy(eps, e0) => Err(SusyError::InconsistentSeed(format!(
                "seed at ε = {eps} vanishes at both ends but E0 = {e0}; only the ground state can do so and stay nodeless"
            ))),
            _ => Ok(FirstOrderCase::GroundState),
        },
        (1, _) => Ok(FirstOrderCase::OneVanishes),
        (0, 2) => Ok(FirstOrderCase::BothDiverge),
        _ => Ok(FirstOrderCase::BoundedSeed),
    }
}

/// Case of a real nodeless seed relative to the ground-state energy `E0`.
pub fn classify_first_order_case<T: Real>(seed: &SeedSolution<T>, e0: T) -> Result<FirstOrderCase> {
    classify(seed, Some(e0))
}

/// First-order partner of `v0` generated by `seed`.
pub fn first_order_partner<T: Real>(
    v0: &PotentialModel<T>,
    seed: &SeedSolution<T>,
) -> Result<PartnerResult<T>> {
    if seed.epsilon.im != T::zero() {
        return Err(SusyError::ParameterBounds(format!(
            "first-order seeds need a real ε, got {}",
            seed.epsilon
        )));
    }
    let seed = on_model_grid(v0, seed);
    let grid = *v0.grid();
    require_nodeless(&grid, &seed.u.real_values(), "seed u")?;
    let eps = seed.epsilon.re;
    let e0 = v0.energy(0);
    let case = classify(&seed, e0)?;
    let mut warnings = Vec::new();
    if let Some(e0) = e0 {
        if eps > e0 && !same_energy(eps, e0) {
            warnings.push(format!(
                "ε = {eps} lies above E0 = {e0}; the level ordering rules assume ε ≤ E0"
            ));
        }
    }

    let u = seed.evaluator();
    let v = v0.evaluator();
    let two = T::lit(2.0);
    let eta = Arc::new(move |x: T| {
        let (a, b) = u(x);
        let (vx, dvx) = v(x);
        let alpha = b.re / a.re;
        let d1 = two * (vx - eps) - alpha * alpha;
        let d2 = two * dvx - two * alpha * d1;
        EtaJet {
            eta: alpha,
            d1,
            d2,
            imag: T::zero(),
        }
    });
    let stage = Stage::new(1, (cx(eps), cx(eps)), v0.evaluator(), eta);
    let (potential, superpotential, imag_residue) = assemble(
        v0,
        &stage,
        format!("first-order partner of {} at ε = {eps}", v0.label),
    )?;

    let u = seed.evaluator();
    let missing = new_state(&potential, cx(eps), move |x| {
        let (a, b) = u(x);
        (a.inv(), -b / (a * a))
    });
    let spectral_change = match case {
        FirstOrderCase::GroundState => SpectralChange::DeleteGround,
        FirstOrderCase::BothDiverge if missing.normalizable => SpectralChange::CreateLevel(eps),
        FirstOrderCase::BothDiverge => {
            warnings.push(format!(
                "1/u at ε = {eps} is not square integrable; no level is created"
            ));
            SpectralChange::Isospectral
        }
        FirstOrderCase::OneVanishes | FirstOrderCase::BoundedSeed => SpectralChange::Isospectral,
    };
    Ok(PartnerResult {
        potential,
        order: 1,
        case: TransformCase::First(case),
        spectral_change,
        new_states: vec![missing],
        superpotential,
        imag_residue,
        warnings,
        stages: vec![stage],
    })
}

/// `(-ψ' + α ψ) / √(2 (E - ε))`, normalized, for an eigenfunction `ψ` of the
/// original Hamiltonian at energy `E`.
///
/// The derivative uses `-ψ'' + α' ψ = (2 (E - ε) - α²) ψ`, which holds for
/// any potential, so only the seed is needed.
pub fn map_eigenfunction_first<T: Real>(
    psi: &SampledFunction<T>,
    energy: T,
    seed: &SeedSolution<T>,
) -> Result<SampledFunction<T>> {
    let eps = seed.epsilon.re;
    let gap = energy - eps;
    if gap.abs() <= T::lit(1e-12) * (T::one() + energy.abs()) {
        return Err(SusyError::CoincidentEnergy(energy.to_f64_lossy()));
    }
    let k = (T::lit(2.0) * gap.abs()).sqrt();
    let two_gap = T::lit(2.0) * gap;
    let (values, derivs) = psi
        .grid
        .nodes()
        .enumerate()
        .map(|(i, x)| {
            let (a, b) = seed.value(x);
            let alpha = (b / a).re;
            let (p, dp) = (psi.values[i], psi.derivatives[i]);
            (
                (-dp + p * alpha) / k,
                (p * (two_gap - alpha * alpha) + dp * alpha) / k,
            )
        })
        .unzip();
    let mut out = SampledFunction::new(psi.grid, values, derivs)?;
    normalize(&mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DomainKind;
    use crate::numerics::calculus::inner_product;
    use crate::numerics::grid::Grid1D;
    use crate::susy::{
        factorization_residual, verify_intertwining, verify_susy_algebra, TestFunction,
    };

    fn oscillator() -> PotentialModel<f64> {
        let g = Grid1D::new(-8.0, 8.0, 2001).unwrap();
        PotentialModel::new("oscillator", DomainKind::WholeLine, g, |x: f64| {
            (x * x / 2.0, x)
        })
        .unwrap()
        .with_spectrum(|n| n as f64 + 0.5)
        .unwrap()
    }

    fn ground(m: &PotentialModel<f64>) -> SeedSolution<f64> {
        SeedSolution::from_evaluator(
            cx(0.5),
            *m.grid(),
            (BoundaryTag::Vanishes, BoundaryTag::Vanishes),
            "ψ0",
            |x: f64| {
                let e = (-x * x / 2.0).exp();
                (cx(e), cx(-x * e))
            },
        )
    }

    #[test]
    fn oscillator_ground_seed_shifts_the_potential() {
        let m = oscillator();
        let p = first_order_partner(&m, &ground(&m)).unwrap();
        assert_eq!(p.spectral_change, SpectralChange::DeleteGround);
        assert_eq!(p.case, TransformCase::First(FirstOrderCase::GroundState));
        for (i, x) in m.grid().nodes().enumerate() {
            assert!(
                (p.v_new().values[i].re - (x * x / 2.0 + 1.0)).abs() < 1e-10,
                "x = {x}"
            );
            assert!((p.superpotential.values[i].re + x).abs() < 1e-12);
        }
        assert!(!p.new_states[0].normalizable);
        assert!(p.warnings.is_empty());
    }

    #[test]
    fn first_excited_state_maps_to_the_new_ground_state() {
        let m = oscillator();
        let seed = ground(&m);
        let psi = SampledFunction::from_real_fn(*m.grid(), |x| {
            let e = (-x * x / 2.0).exp();
            (x * e, (1.0 - x * x) * e)
        });
        let mapped = map_eigenfunction_first(&psi, 1.5, &seed).unwrap();
        let target = SampledFunction::from_real_fn(*m.grid(), |x| {
            let e = (-x * x / 2.0).exp() / std::f64::consts::PI.powf(0.25);
            (e, -x * e)
        });
        assert!((inner_product(&mapped, &mapped).re - 1.0).abs() < 1e-10);
        assert!((inner_product(&mapped, &target).norm() - 1.0).abs() < 1e-9);
        assert!(matches!(
            map_eigenfunction_first(&psi, 0.5, &seed),
            Err(SusyError::CoincidentEnergy(_))
        ));
    }

    #[test]
    fn oscillator_checks_pass() {
        let m = oscillator();
        let p = first_order_partner(&m, &ground(&m)).unwrap();
        let r = verify_intertwining(&m, &p, &[0.3, 1.5, 2.2]).unwrap();
        assert!(r < 1e-6, "intertwining residual {r:e}");
        let tests: Vec<_> = (0..4)
            .map(|k| {
                TestFunction::windowed_trig(
                    -1.0 + 0.5 * k as f64,
                    1.5,
                    vec![(1.0, 0.7 * k as f64, 0.3), (0.4, 2.1, 1.0)],
                )
            })
            .collect();
        assert!(factorization_residual(&m, &p, &tests).unwrap() < 1e-6);
        assert!(verify_susy_algebra(&m, &p, &tests).unwrap() < 1e-6);
    }

    #[test]
    fn classification_by_boundary_tags() {
        let m = oscillator();
        let g = *m.grid();
        let tagged = |tags| {
            SeedSolution::from_evaluator(cx(0.2), g, tags, "test", |x: f64| {
                (cx(x.cosh()), cx(x.sinh()))
            })
        };
        use BoundaryTag::*;
        assert_eq!(
            classify_first_order_case(&ground(&m), 0.5).unwrap(),
            FirstOrderCase::GroundState
        );
        assert_eq!(
            classify_first_order_case(&tagged((Diverges, Diverges)), 0.5).unwrap(),
            FirstOrderCase::BothDiverge
        );
        assert_eq!(
            classify_first_order_case(&tagged((Vanishes, Diverges)), 0.5).unwrap(),
            FirstOrderCase::OneVanishes
        );
        assert!(matches!(
            classify_first_order_case(&tagged((Vanishes, Vanishes)), 0.5),
            Err(SusyError::InconsistentSeed(_))
        ));
    }

    #[test]
    fn seed_with_a_node_is_rejected() {
        let m = oscillator();
        let seed = SeedSolution::from_evaluator(
            cx(1.5),
            *m.grid(),
            (BoundaryTag::Vanishes, BoundaryTag::Vanishes),
            "ψ1",
            |x: f64| {
                let e = (-x * x / 2.0).exp();
                (cx(x * e), cx((1.0 - x * x) * e))
            },
        );
        match first_order_partner(&m, &seed) {
            Err(SusyError::SingularTransform { location, .. }) => assert!(location.abs() < 1e-2),
            other => panic!("expected a singular transform, got {other:?}"),
        }
    }
}
