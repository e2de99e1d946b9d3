use susyqm::model::PotentialModel;
use susyqm::numerics::grid::Grid1D;
use susyqm::periodic::*;
use susyqm::susy::*;

fn lame(m: f64, cells: usize) -> (LameParams<f64>, PotentialModel<f64>) {
    let p = LameParams::new(1, m).unwrap();
    let g = multi_cell_grid(p.period, cells, cells, 200).unwrap();
    (p, lame_model(p, g).unwrap())
}

fn assert_edges(found: &[f64], expected: &[f64], tol: f64) {
    assert_eq!(
        found.len(),
        expected.len(),
        "found {found:?}, expected {expected:?}"
    );
    for (a, b) in found.iter().zip(expected) {
        assert!(
            (a - b).abs() <= tol,
            "found {found:?}, expected {expected:?}"
        );
    }
}

#[test]
fn lame_band_structure() {
    let (_, model) = lame(0.5, 1);
    let bands = band_edges(&model, (0.0, 1.5), 300).unwrap();
    assert_edges(&bands.edge_energies(), &[0.25, 0.5, 0.75], 1e-6);
    let tags: Vec<Periodicity> = bands.edges.iter().map(|e| e.periodicity).collect();
    assert_eq!(
        tags,
        vec![
            Periodicity::Periodic,
            Periodicity::Antiperiodic,
            Periodicity::Antiperiodic
        ]
    );
    assert!(bands.edges.iter().all(|e| !e.double_root));
    assert_eq!(bands.bands.len(), 2);
    assert_edges(
        &[bands.bands[0].0, bands.bands[0].1, bands.bands[1].0],
        &[0.25, 0.5, 0.75],
        1e-6,
    );
    assert!(bands.top_band_open());
    assert_eq!(bands.gaps.len(), 2);
    assert_edges(&[bands.gaps[1].0, bands.gaps[1].1], &[0.5, 0.75], 1e-6);
    assert!((discriminant(&model, 0.25).unwrap() - 2.0).abs() <= 1e-6);
}

#[test]
fn band_edges_for_other_parameters() {
    for m in [0.3, 0.7] {
        let (_, model) = lame(m, 1);
        let bands = band_edges(&model, (0.0, 1.5), 300).unwrap();
        assert_edges(
            &bands.edge_energies(),
            &[m / 2.0, 0.5, (1.0 + m) / 2.0],
            1e-6,
        );
    }
}

#[test]
fn bloch_functions_below_the_lowest_band() {
    let (p, model) = lame(0.5, 3);
    let b = bloch_functions(&model, 0.22).unwrap();
    let f = b.floquet;
    assert_eq!(f.regime, Regime::Gap);
    assert!(f.beta_plus.im == 0.0 && f.beta_minus.im == 0.0);
    assert!((f.beta_plus * f.beta_minus - 1.0).norm() <= 1e-9);
    assert!((f.beta_plus + f.beta_minus - f.discriminant).norm() <= 1e-9);
    assert!(f.quasimomentum.is_none());
    for u in [&b.plus, &b.minus] {
        let beta = bloch_multiplier(u, p.period).unwrap();
        let logs: Vec<f64> = (-2..2)
            .map(|k| {
                let x = 0.3 + k as f64 * p.period;
                (u.value(x + p.period).0.norm() / u.value(x).0.norm()).ln()
            })
            .collect();
        for l in &logs {
            assert!((l - logs[0]).abs() <= 1e-5, "{logs:?}");
        }
        assert!((logs[0] - beta.norm().ln()).abs() <= 1e-5);
    }
    assert!(b.warnings.is_empty());
}

#[test]
fn bloch_functions_in_a_band_are_bounded() {
    let (p, model) = lame(0.5, 3);
    let b = bloch_functions(&model, 0.4).unwrap();
    assert_eq!(b.floquet.regime, Regime::Band);
    assert!((b.floquet.beta_plus.norm() - 1.0).abs() <= 1e-9);
    let k = b.floquet.quasimomentum.unwrap();
    assert!(k > 0.0 && k < std::f64::consts::PI / p.period);
    let peak = |u: &susyqm::model::SeedSolution<f64>, lo: f64, hi: f64| {
        u.u.grid
            .nodes()
            .enumerate()
            .filter(|(_, x)| *x >= lo && *x <= hi)
            .map(|(i, _)| u.u.values[i].norm())
            .fold(0.0, f64::max)
    };
    for u in [&b.plus, &b.minus] {
        let first = peak(u, 0.0, p.period);
        let all = peak(u, -3.0 * p.period, 3.0 * p.period);
        assert!(all <= first * (1.0 + 1e-6), "{all} vs {first}");
        for x in [-4.0, -1.3, 0.2, 1.9, 3.3] {
            let (a, _) = u.value(x);
            let (c, _) = u.value(x + p.period);
            assert!(
                (c - a * bloch_multiplier(u, p.period).unwrap()).norm() <= 1e-6 * (1.0 + a.norm())
            );
        }
    }
}

#[test]
fn band_edge_energy_is_degenerate() {
    let (_, model) = lame(0.5, 1);
    let b = bloch_functions(&model, 0.5).unwrap();
    assert_eq!(b.floquet.regime, Regime::Edge);
    assert_eq!(b.warnings.len(), 1);
}

fn shifted_deviation(p: LameParams<f64>, partner: &PartnerResult<f64>) -> f64 {
    let k = p.quarter_period();
    partner
        .potential
        .grid()
        .nodes()
        .enumerate()
        .map(|(i, x)| (partner.v_new().values[i].re - lame_potential(p, x + k)).abs())
        .fold(0.0, f64::max)
}

#[test]
fn dn_seed_is_self_isospectral() {
    for m in [0.3, 0.5, 0.7] {
        let (p, model) = lame(m, 2);
        let states = lame1_band_edge_states(p, *model.grid()).unwrap();
        let partner = susy_periodic_first(&model, &states[0].seed).unwrap();
        assert_eq!(partner.spectral_change, SpectralChange::Isospectral);
        let dev = shifted_deviation(p, &partner);
        assert!(dev <= 1e-7, "m = {m}: {dev:e}");
    }
}

#[test]
fn cn_sn_pair_is_self_isospectral() {
    for m in [0.3, 0.5, 0.7] {
        let (p, model) = lame(m, 2);
        let states = lame1_band_edge_states(p, *model.grid()).unwrap();
        let partner = susy_periodic_second(&model, &states[1].seed, &states[2].seed).unwrap();
        assert_eq!(partner.order, 2);
        let dev = shifted_deviation(p, &partner);
        assert!(dev <= 1e-7, "m = {m}: {dev:e}");
    }
}

#[test]
fn bloch_seed_partners_keep_the_band_edges() {
    let (p, model) = lame(0.5, 2);
    let original = band_edges(
        &model
            .resampled(Grid1D::new(0.0, p.period, 401).unwrap())
            .unwrap(),
        (0.0, 1.5),
        300,
    )
    .unwrap();
    let states = lame1_band_edge_states(p, *model.grid()).unwrap();
    let below = bloch_functions(&model, 0.1).unwrap().plus;
    let partners = [
        susy_periodic_first(&model, &states[0].seed).unwrap(),
        susy_periodic_first(&model, &below).unwrap(),
        susy_periodic_second(&model, &states[1].seed, &states[2].seed).unwrap(),
    ];
    for partner in &partners {
        let bands = band_edges(&partner.potential, (0.0, 1.5), 300).unwrap();
        assert_edges(&bands.edge_energies(), &original.edge_energies(), 1e-5);
    }
    let below_partner = &partners[1];
    for e in [0.05, 0.3, 0.6, 1.2] {
        let d0 = discriminant(&model, e).unwrap();
        let d1 = discriminant(&below_partner.potential, e).unwrap();
        assert!((d0 - d1).abs() <= 1e-5, "E = {e}: {d0} vs {d1}");
    }
}

#[test]
fn a_seed_inside_a_band_is_rejected() {
    let (_, model) = lame(0.5, 1);
    let b = bloch_functions(&model, 0.4).unwrap();
    assert!(susy_periodic_first(&model, &b.plus).is_err());
}

fn far_translates(
    p: LameParams<f64>,
    model: &PotentialModel<f64>,
    partner: &PartnerResult<f64>,
) -> (f64, f64) {
    let (left, right) = far_cell_translates(&partner.potential, model, p.period, FAR_CELLS);
    (left.deviation, right.deviation)
}

fn outer_cell_edges_match(
    p: LameParams<f64>,
    model: &PotentialModel<f64>,
    partner: &PartnerResult<f64>,
) {
    let original = band_edges(model, (0.0, 1.5), 300).unwrap().edge_energies();
    let g = *partner.potential.grid();
    for start in [g.x_min(), g.x_max() - p.period] {
        let cell = far_cell_model(&partner.potential, p.period, start).unwrap();
        let edges = band_edges(&cell, (0.0, 1.5), 300).unwrap().edge_energies();
        assert_edges(&edges, &original, 1e-4);
    }
}

#[test]
fn combination_seed_creates_a_level_below_the_lowest_band() {
    let p = LameParams::new(1, 0.5).unwrap();
    let model = lame_model(p, lame_grid(p).unwrap()).unwrap();
    let seed = bloch_combination(&model, 0.22, 1.0, 1.0).unwrap();
    let partner = susy_periodic_first_general(&model, &seed).unwrap();
    assert_eq!(partner.spectral_change, SpectralChange::CreateLevel(0.22));
    assert_eq!(partner.new_states.len(), 1);
    let state = &partner.new_states[0];
    assert!(state.normalizable);
    assert!(square_integrable(&partner.potential.domain, &state.state));
    let (l, r) = far_translates(p, &model, &partner);
    assert!(l <= 1e-4 && r <= 1e-4, "{l:e} {r:e}");
    outer_cell_edges_match(p, &model, &partner);
    assert!(susy_periodic_first(&model, &seed).is_err());
}

#[test]
fn combination_seeds_create_two_levels_in_the_gap() {
    let p = LameParams::new(1, 0.5).unwrap();
    let model = lame_model(p, lame_grid(p).unwrap()).unwrap();
    let (s1, s2) = gap_seed_pair(&model, 0.64, 0.65).unwrap();
    let partner = susy_periodic_second(&model, &s1, &s2).unwrap();
    assert_eq!(
        partner.spectral_change,
        SpectralChange::CreateTwo(0.64, 0.65)
    );
    assert_eq!(partner.new_states.len(), 2);
    for s in &partner.new_states {
        assert!(s.normalizable, "{}", s.energy);
        assert!(square_integrable(&partner.potential.domain, &s.state));
    }
    outer_cell_edges_match(p, &model, &partner);
}

#[test]
fn gap_pair_partner_approaches_a_translate() {
    // close energies make the approach slow; 16 cells bring the outer two within 1e-4
    let p = LameParams::new(1, 0.5).unwrap();
    let mut last = f64::INFINITY;
    for cells in [12, 16] {
        let model = lame_model(
            p,
            multi_cell_grid(p.period, cells, cells, DEFAULT_POINTS_PER_CELL).unwrap(),
        )
        .unwrap();
        let (s1, s2) = gap_seed_pair(&model, 0.64, 0.65).unwrap();
        let partner = susy_periodic_second(&model, &s1, &s2).unwrap();
        let (l, r) = far_translates(p, &model, &partner);
        assert!(l.max(r) < last / 10.0);
        last = l.max(r);
    }
    assert!(last <= 1e-4, "{last:e}");
}

#[test]
fn a_band_energy_has_no_combination_seed() {
    let (_, model) = lame(0.5, 1);
    assert!(bloch_combination(&model, 0.4, 1.0, 1.0).is_err());
    assert!(bloch_combination(&model, 0.22, 0.0, 0.0).is_err());
}
