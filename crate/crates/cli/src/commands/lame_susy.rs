use clap::{Args, ValueEnum};
use serde::Serialize;
use susyqm::model::PotentialModel;
use susyqm::periodic::{
    band_edges, bloch_combination, bloch_functions, far_cell_model, far_cell_translates,
    gap_seed_pair, lame1_band_edge_states, lame_model, multi_cell_grid, susy_periodic_first,
    susy_periodic_first_general, susy_periodic_second, LameParams, FAR_CELLS,
};
use susyqm::susy::PartnerResult;
use susyqm::Grid;

use super::{real_parts, require};
use crate::error::CliResult;
use crate::output::Table;
use crate::{Check, OutputArgs, Report};

pub const EDGE_THRESHOLD: f64 = 1e-5;
pub const FAR_EDGE_THRESHOLD: f64 = 1e-4;
pub const SELF_ISOSPECTRAL_THRESHOLD: f64 = 1e-7;
pub const TRANSLATE_THRESHOLD: f64 = 1e-4;
const SCAN: (f64, f64) = (0.0, 1.5);
const SCAN_POINTS: usize = 300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LameCase {
    /// First order with the `dn` band-edge state.
    Dn,
    /// Second order with the `cn` and `sn` band-edge states.
    CnSn,
    /// First order with a Bloch function at --epsilon below the lowest band.
    Bloch,
    /// First order with a nodeless Bloch combination at --epsilon.
    Combination,
    /// Second order with two combinations at --epsilon and --epsilon2 in a gap.
    GapPair,
}

impl LameCase {
    fn whole_line(self) -> bool {
        matches!(self, LameCase::Combination | LameCase::GapPair)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LameSusyArgs {
    #[arg(long)]
    pub m: f64,
    #[arg(long, value_enum)]
    pub case: LameCase,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub epsilon2: Option<f64>,
    /// Weight of the growing Bloch function in a combination.
    #[arg(long, default_value_t = 1.0)]
    pub c_plus: f64,
    /// Weight of the decaying Bloch function in a combination.
    #[arg(long, default_value_t = 1.0)]
    pub c_minus: f64,
    /// Periods on each side of the origin for the whole-line cases.
    #[arg(long, default_value_t = susyqm::periodic::DEFAULT_CELLS)]
    pub cells: usize,
    /// Grid points per period.
    #[arg(long, default_value_t = susyqm::periodic::DEFAULT_POINTS_PER_CELL)]
    pub seed_grid: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn max_edge_error(found: &[f64], expected: &[f64]) -> f64 {
    if found.len() != expected.len() {
        return f64::INFINITY;
    }
    found
        .iter()
        .zip(expected)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

fn transform(
    a: &LameSusyArgs,
    model: &PotentialModel<f64>,
    p: LameParams<f64>,
) -> CliResult<PartnerResult<f64>> {
    let eps = || require("--epsilon", a.epsilon, "for this case");
    Ok(match a.case {
        LameCase::Dn | LameCase::CnSn => {
            let s = lame1_band_edge_states(p, *model.grid())?;
            if a.case == LameCase::Dn {
                susy_periodic_first(model, &s[0].seed)?
            } else {
                susy_periodic_second(model, &s[1].seed, &s[2].seed)?
            }
        }
        LameCase::Bloch => susy_periodic_first(model, &bloch_functions(model, eps()?)?.plus)?,
        LameCase::Combination => susy_periodic_first_general(
            model,
            &bloch_combination(model, eps()?, a.c_plus, a.c_minus)?,
        )?,
        LameCase::GapPair => {
            let (s1, s2) = gap_seed_pair(
                model,
                eps()?,
                require("--epsilon2", a.epsilon2, "for the gap pair")?,
            )?;
            susy_periodic_second(model, &s1, &s2)?
        }
    })
}

pub fn run(a: &LameSusyArgs) -> CliResult<Report> {
    let p = LameParams::new(1, a.m)?;
    let cells = if a.case.whole_line() {
        a.cells
    } else {
        FAR_CELLS
    };
    let model = lame_model(p, multi_cell_grid(p.period, cells, cells, a.seed_grid)?)?;
    let cell = model.resampled(Grid::new(0.0, p.period, 401)?)?;
    let original = band_edges(&cell, SCAN, SCAN_POINTS)?.edge_energies();
    let partner = transform(a, &model, p)?;

    let mut report = Report::default();
    report.line("potential", &model.label);
    report.line("period", p.period);
    report.line("order", partner.order);
    report.line("spectral change", partner.spectral_change);
    for w in &partner.warnings {
        report.line("warning", w);
    }

    let (left, right) = far_cell_translates(&partner.potential, &model, p.period, FAR_CELLS);
    report.line(
        "far-cell shift (left)",
        format!("{:.10} (deviation {:.3e})", left.shift, left.deviation),
    );
    report.line(
        "far-cell shift (right)",
        format!("{:.10} (deviation {:.3e})", right.shift, right.deviation),
    );

    if a.case.whole_line() {
        for s in &partner.new_states {
            report.line(
                "new state",
                format!("E = {:.10}, normalizable = {}", s.energy.re, s.normalizable),
            );
            report.check(Check::equals(
                format!("normalizable at {:.6}", s.energy.re),
                f64::from(u8::from(s.normalizable)),
                1.0,
            ));
        }
        let g = *partner.potential.grid();
        for (side, start) in [("left", g.x_min()), ("right", g.x_max() - p.period)] {
            let edges = band_edges(
                &far_cell_model(&partner.potential, p.period, start)?,
                SCAN,
                SCAN_POINTS,
            )?
            .edge_energies();
            report.check(Check::at_most(
                format!("outer {side} cell band edges"),
                max_edge_error(&edges, &original),
                FAR_EDGE_THRESHOLD,
            ));
        }
        if a.case == LameCase::Combination {
            report.check(Check::at_most(
                "far-cell translate",
                left.deviation.max(right.deviation),
                TRANSLATE_THRESHOLD,
            ));
        }
    } else {
        let edges = band_edges(&partner.potential, SCAN, SCAN_POINTS)?.edge_energies();
        report.check(Check::at_most(
            "band edges",
            max_edge_error(&edges, &original),
            EDGE_THRESHOLD,
        ));
        let k = p.quarter_period();
        let dev = partner
            .potential
            .grid()
            .nodes()
            .enumerate()
            .map(|(i, x)| (partner.v_new().values[i].re - model.value(x + k).0).abs())
            .fold(0.0, f64::max);
        let half = dev <= SELF_ISOSPECTRAL_THRESHOLD;
        report.line(
            "shift",
            if half {
                "T/2".to_string()
            } else {
                format!("none (translate by T/2 off by {dev:.3e})")
            },
        );
        if a.case != LameCase::Bloch {
            report.check(Check::at_most(
                "translate by T/2",
                dev,
                SELF_ISOSPECTRAL_THRESHOLD,
            ));
        }
    }

    let g = *partner.potential.grid();
    let mut t = Table::new();
    t.push("x", g.nodes().collect());
    t.push("V0", g.nodes().map(|x| model.value(x).0).collect());
    t.push("V_new", real_parts(&partner.v_new().values));
    for (k, s) in partner.new_states.iter().enumerate() {
        t.push(format!("psi_{k}"), real_parts(&s.state.values));
    }
    report.table("potential", t);
    Ok(report)
}
