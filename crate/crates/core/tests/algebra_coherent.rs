use proptest::prelude::*;
use susyqm::algebra_cs::*;
use susyqm::poschl_teller::PTParams;
use susyqm::{cx, Cx};

fn pt() -> SpectrumFunction<f64> {
    SpectrumFunction::poschl_teller(PTParams::new(3.0, 4.0).unwrap())
}

fn all_specs(alpha: f64) -> Vec<LadderSpec<f64>> {
    let mut out = Vec::new();
    for (s, new) in [
        (SpectrumFunction::oscillator(), (-1.0, -0.4)),
        (pt(), (10.0, 20.0)),
        (pt(), (44.0, 52.0)),
    ] {
        for kind in [LadderKind::Intrinsic, LadderKind::Linear] {
            out.push(LadderSpec::h0(kind, alpha, s.clone()).unwrap());
        }
        for kind in [
            LadderKind::Intrinsic,
            LadderKind::Linear,
            LadderKind::Natural,
        ] {
            out.push(LadderSpec::h2(kind, alpha, s.clone(), new.0, new.1).unwrap());
        }
    }
    out
}

#[test]
fn coherent_states_are_eigenvectors() {
    let zs = [
        cx(0.0),
        cx(1.5),
        Cx::new(0.3, -1.1),
        Cx::new(-1.2, 1.6),
        Cx::from_polar(2.0, 2.5),
    ];
    for alpha in [0.0, 0.7] {
        for spec in all_specs(alpha) {
            for z in zs {
                let cs = coherent_coefficients(&spec, z, DEFAULT_TOLERANCE).unwrap();
                let res = eigenvalue_residual(&spec, &cs).unwrap();
                assert!(
                    res <= 1e-8,
                    "{} {} z = {z}: {res:e}",
                    spec.kind,
                    spec.spectrum.label
                );
                assert!(cs.norm_residual <= 1e-10);
                let norm: f64 = cs.coefficients.iter().map(|c| c.norm_sqr()).sum();
                assert!((norm - 1.0).abs() <= 1e-12);
                assert!(cs.state().new_levels.iter().all(|c| c.norm() == 0.0));
            }
        }
    }
}

#[test]
fn pt_intrinsic_state_at_one_and_a_half() {
    let spec = LadderSpec::h0(LadderKind::Intrinsic, 0.0, pt()).unwrap();
    let cs = coherent_coefficients(&spec, cx(1.5), DEFAULT_TOLERANCE).unwrap();
    assert!(eigenvalue_residual(&spec, &cs).unwrap() <= 1e-8);
    // c_1 / c_0 = z / √(E1 - E0)
    let ratio = cs.coefficients[1] / cs.coefficients[0];
    assert!((ratio - cx(1.5 / 16.0_f64.sqrt())).norm() <= 1e-14);
}

#[test]
fn oscillator_moments_are_factorials() {
    for kind in [LadderKind::Intrinsic, LadderKind::Linear] {
        let spec = LadderSpec::h0(kind, 0.7, SpectrumFunction::oscillator()).unwrap();
        let rho = moments(&spec, 10);
        let mut fact = 1.0;
        for (m, r) in rho.iter().enumerate() {
            if m > 0 {
                fact *= m as f64;
            }
            assert!((r - fact).abs() <= 1e-12 * fact, "{kind} m = {m}");
        }
    }
}

#[test]
fn moment_reports() {
    let linear = moment_check(&LadderSpec::h0(LadderKind::Linear, 0.0, pt()).unwrap(), 6);
    assert!(linear.max_relative_error.unwrap() <= 1e-8);
    assert_eq!(linear.quadrature.as_ref().unwrap().len(), 7);

    let intrinsic = moment_check(
        &LadderSpec::h0(LadderKind::Intrinsic, 0.0, pt()).unwrap(),
        4,
    );
    assert!(intrinsic.quadrature.is_none());
    assert!((intrinsic.moments[1] - 2.0 * (7.0 + 1.0)).abs() <= 1e-12);
    assert!((intrinsic.moments[3] - 16.0 * 36.0 * 60.0).abs() <= 1e-9);

    let (e1, e2) = (10.0, 20.0);
    let s = pt();
    let natural = moment_check(
        &LadderSpec::h2(LadderKind::Natural, 0.0, s.clone(), e1, e2).unwrap(),
        6,
    );
    assert_eq!(natural.moments[0], 1.0);
    for m in 1..=6 {
        // ρ_m Π_i (E_m - ε_i)(E_{m-1} - ε_i)² ... (E_1 - ε_i)²(E_0 - ε_i)
        let mut want: f64 = (1..=m).map(|k| s.e(k) - s.e0()).product();
        for eps in [e1, e2] {
            want *= (s.e(m) - eps) * (s.e(0) - eps);
            want *= (1..m).map(|k| (s.e(k) - eps).powi(2)).product::<f64>();
        }
        assert!((natural.moments[m] - want).abs() <= 1e-12 * want, "m = {m}");
    }
}

#[test]
fn linear_kernel_matches_the_exponential() {
    for spec in [
        LadderSpec::h0(LadderKind::Linear, 0.0, pt()).unwrap(),
        LadderSpec::h2(LadderKind::Linear, 0.7, pt(), 10.0, 20.0).unwrap(),
    ] {
        let (z, w) = (cx(1.0), Cx::new(0.0, 1.0));
        let k = reproducing_kernel(&spec, z, w).unwrap();
        assert!((k - linear_kernel(z, w)).norm() <= 1e-12, "{k}");
    }
}

#[test]
fn kernel_normalization() {
    for spec in all_specs(0.0) {
        for z in [cx(0.0), Cx::new(0.5, 0.5), cx(-1.9)] {
            let k = reproducing_kernel(&spec, z, z).unwrap();
            assert!((k - 1.0).norm() <= 1e-13);
        }
        let k = reproducing_kernel(&spec, cx(0.3), Cx::new(0.1, 1.2)).unwrap();
        assert!(k.norm() < 1.0);
    }
}

#[test]
fn kernel_equals_the_overlap_of_coherent_states() {
    let spec = LadderSpec::h2(LadderKind::Natural, 0.7, pt(), 10.0, 20.0).unwrap();
    let (z, w) = (Cx::new(0.8, -0.6), Cx::new(-0.2, 1.4));
    let a = coherent_coefficients(&spec, z, DEFAULT_TOLERANCE)
        .unwrap()
        .coefficients;
    let b = coherent_coefficients(&spec, w, DEFAULT_TOLERANCE)
        .unwrap()
        .coefficients;
    let overlap: Cx<f64> = a.iter().zip(&b).map(|(x, y)| x.conj() * y).sum();
    assert!((overlap - reproducing_kernel(&spec, z, w).unwrap()).norm() <= 1e-12);
}

#[test]
fn coherent_evolution() {
    let osc = LadderSpec::h0(LadderKind::Intrinsic, 0.0, SpectrumFunction::oscillator()).unwrap();
    let z = Cx::new(1.1, 0.4);
    assert_eq!(
        evolution_check(&osc, z, 0.0, DEFAULT_TOLERANCE).unwrap(),
        0.0
    );
    assert!(
        evolution_check(&osc, z, std::f64::consts::FRAC_PI_3, DEFAULT_TOLERANCE).unwrap() <= 1e-12
    );
    let natural = LadderSpec::h2(LadderKind::Natural, 0.7, pt(), 10.0, 20.0).unwrap();
    assert!(evolution_check(&natural, z, 0.1, DEFAULT_TOLERANCE).unwrap() <= 1e-10);
}

#[test]
fn degeneracy_of_z_zero() {
    let s = pt();
    assert_eq!(
        kernel_degeneracy(
            &LadderSpec::h0(LadderKind::Intrinsic, 0.0, s.clone()).unwrap(),
            30
        )
        .unwrap(),
        1
    );
    assert_eq!(
        kernel_degeneracy(
            &LadderSpec::h0(LadderKind::Linear, 0.0, s.clone()).unwrap(),
            30
        )
        .unwrap(),
        1
    );
    for kind in [
        LadderKind::Natural,
        LadderKind::Intrinsic,
        LadderKind::Linear,
    ] {
        assert_eq!(
            kernel_degeneracy(
                &LadderSpec::h2(kind, 0.0, s.clone(), 10.0, 20.0).unwrap(),
                30
            )
            .unwrap(),
            3,
            "{kind}"
        );
    }
}

#[test]
fn partner_operators_coincide_with_h0_on_the_isospectral_part() {
    for kind in [LadderKind::Intrinsic, LadderKind::Linear] {
        let h0 = LadderSpec::h0(kind, 0.7, pt()).unwrap();
        let h2 = LadderSpec::h2(kind, 0.7, pt(), 44.0, 52.0).unwrap();
        for n in 0..20 {
            assert_eq!(ladder_coefficient(&h0, n), ladder_coefficient(&h2, n));
        }
        let a = coherent_coefficients(&h0, cx(1.3), DEFAULT_TOLERANCE).unwrap();
        let b = coherent_coefficients(&h2, cx(1.3), DEFAULT_TOLERANCE).unwrap();
        assert_eq!(a.coefficients, b.coefficients);
    }
}

#[test]
fn commutators() {
    let dim = 15;
    let linear = LadderSpec::h2(LadderKind::Linear, 0.7, pt(), 10.0, 20.0).unwrap();
    let natural = LadderSpec::h2(LadderKind::Natural, 0.7, pt(), 10.0, 20.0).unwrap();
    for n in 0..dim - 1 {
        let b = LadderState::basis(2, dim, n);
        let c = commutator(&linear, &b).unwrap();
        assert!(c.sub(&b).norm() <= 1e-12, "n = {n}");
        let c = commutator(&natural, &b).unwrap();
        let want = ladder_coefficient(&natural, n + 1).norm_sqr()
            - ladder_coefficient(&natural, n).norm_sqr();
        assert!(
            c.sub(&b.scaled(cx(want))).norm() <= 1e-12 * want.abs(),
            "n = {n}"
        );
    }
    for i in 0..2 {
        let b = LadderState::new_level(2, dim, i);
        for spec in [&linear, &natural] {
            assert_eq!(commutator(spec, &b).unwrap().norm(), 0.0);
            assert_eq!(
                ladder_apply(spec, &b, Direction::Raise).unwrap().norm(),
                0.0
            );
        }
    }
}

#[test]
fn ladders_shift_the_index_by_one() {
    let spec = LadderSpec::h0(LadderKind::Intrinsic, 0.7, pt()).unwrap();
    for n in 1..9 {
        let up = ladder_apply(&spec, &LadderState::basis(0, 10, n), Direction::Raise).unwrap();
        let down = ladder_apply(&spec, &LadderState::basis(0, 10, n), Direction::Lower).unwrap();
        let support = |s: &LadderState<f64>| {
            s.levels
                .iter()
                .enumerate()
                .filter(|(_, c)| c.norm() > 0.0)
                .map(|(i, _)| i)
                .collect::<Vec<_>>()
        };
        assert_eq!(support(&up), vec![n + 1]);
        assert_eq!(support(&down), vec![n - 1]);
    }
}

#[test]
fn natural_state_at_a_vanishing_coefficient() {
    let s = pt();
    let spec = LadderSpec::h2(LadderKind::Natural, 0.0, s.clone(), s.e(1), 45.0).unwrap();
    assert!(coherent_coefficients(&spec, cx(0.5), DEFAULT_TOLERANCE).is_err());
    assert_eq!(
        coherent_coefficients(&spec, cx(0.0), DEFAULT_TOLERANCE)
            .unwrap()
            .truncation,
        0
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_is_bounded_by_one(re in -2.0..2.0f64, im in -2.0..2.0f64, re2 in -2.0..2.0f64, im2 in -2.0..2.0f64, which in 0usize..15) {
        let spec = &all_specs(0.7)[which];
        let k = reproducing_kernel(spec, Cx::new(re, im), Cx::new(re2, im2)).unwrap();
        prop_assert!(k.norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn linear_kernels_agree(re in -2.0..2.0f64, im in -2.0..2.0f64, re2 in -2.0..2.0f64, im2 in -2.0..2.0f64) {
        let spec = LadderSpec::h0(LadderKind::Linear, 0.0, SpectrumFunction::oscillator()).unwrap();
        let (z, w) = (Cx::new(re, im), Cx::new(re2, im2));
        prop_assert!((reproducing_kernel(&spec, z, w).unwrap() - linear_kernel(z, w)).norm() <= 1e-12);
    }
}
