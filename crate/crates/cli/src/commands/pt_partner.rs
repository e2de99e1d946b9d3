use clap::{Args, ValueEnum};
use serde::Serialize;
use susyqm::model::SeedSolution;
use susyqm::poschl_teller::{
    pt_eigen_seed, pt_eigenvalue, pt_general_solution, pt_grid, pt_model, PTParams, PTSeedRecipe,
    DEFAULT_POINTS,
};
use susyqm::susy::{
    first_order_partner, move_level, second_order_complex, second_order_confluent,
    second_order_real, verify_intertwining, PartnerResult,
};
use susyqm::{cx, Grid};

use super::{parse_complex, real_parts, require};
use crate::error::{CliError, CliResult};
use crate::output::Table;
use crate::{Check, OutputArgs, Report};

pub const INTERTWINING_THRESHOLD: f64 = 1e-5;
pub const IMAG_RESIDUE_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PtCase {
    /// First order with the ground state as seed.
    DeleteGround,
    /// First order with a general seed at --epsilon.
    First,
    /// Second order with two real seeds at --epsilon and --epsilon2.
    Real,
    /// Second order, confluent, at --epsilon with --w0.
    Confluent,
    /// Second order with a complex --epsilon.
    Complex,
    /// Moves level --level to --epsilon.
    Move,
}

impl PtCase {
    fn order(self) -> usize {
        match self {
            PtCase::DeleteGround | PtCase::First => 1,
            PtCase::Real | PtCase::Confluent | PtCase::Complex => 2,
            PtCase::Move => 4,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PtPartnerArgs {
    #[arg(long)]
    pub lambda: f64,
    #[arg(long)]
    pub nu: f64,
    #[arg(long, value_enum)]
    pub case: PtCase,
    /// Checked against the case when given.
    #[arg(long)]
    pub order: Option<usize>,
    /// Factorization energy; complex values as a+bi.
    #[arg(long)]
    pub epsilon: Option<String>,
    #[arg(long)]
    pub epsilon2: Option<f64>,
    /// Seed `B = 1, A = -b/a + q` at --epsilon.
    #[arg(long)]
    pub q: Option<f64>,
    /// Same for the second seed.
    #[arg(long)]
    pub q2: Option<f64>,
    /// Weight of the solution regular at the origin (a+bi).
    #[arg(long = "A")]
    pub a_weight: Option<String>,
    /// Weight of the solution regular at π/2 (a+bi).
    #[arg(long = "B")]
    pub b_weight: Option<String>,
    #[arg(long)]
    pub w0: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub x0: f64,
    /// Eigenfunction index used as the (first) seed.
    #[arg(long)]
    pub level: Option<usize>,
    #[arg(long)]
    pub level2: Option<usize>,
    /// Grid points on (0, π/2).
    #[arg(long = "seed-grid", default_value_t = DEFAULT_POINTS)]
    pub seed_grid: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Index `n` when `e` is the eigenvalue `E_n`.
fn eigen_index(p: PTParams<f64>, e: f64) -> Option<usize> {
    (0..10_000)
        .take_while(|&n| pt_eigenvalue(p, n) <= e * (1.0 + 1e-12))
        .find(|&n| (pt_eigenvalue(p, n) - e).abs() <= 1e-12 * e.abs())
}

struct SeedChoice {
    epsilon: Option<f64>,
    q: Option<f64>,
    level: Option<usize>,
}

fn real_seed(
    p: PTParams<f64>,
    g: Grid,
    choice: SeedChoice,
    a: &PtPartnerArgs,
    flag: &str,
) -> CliResult<SeedSolution<f64>> {
    if let Some(n) = choice.level {
        return Ok(pt_eigen_seed(p, n, g)?);
    }
    let e = require(flag, choice.epsilon, "for this case")?;
    if let Some(q) = choice.q {
        return Ok(pt_general_solution(p, PTSeedRecipe::with_q(p, e, q)?, g)?);
    }
    if flag == "epsilon" && (a.a_weight.is_some() || a.b_weight.is_some()) {
        let wa = a
            .a_weight
            .as_deref()
            .map(|s| parse_complex("A", s))
            .transpose()?
            .unwrap_or(cx(0.0));
        let wb = a
            .b_weight
            .as_deref()
            .map(|s| parse_complex("B", s))
            .transpose()?
            .unwrap_or(cx(0.0));
        return Ok(pt_general_solution(
            p,
            PTSeedRecipe::general(p, cx(e), wa, wb)?,
            g,
        )?);
    }
    if let Some(n) = eigen_index(p, e) {
        return Ok(pt_eigen_seed(p, n, g)?);
    }
    Ok(pt_general_solution(
        p,
        PTSeedRecipe::regular_at_origin(p, cx(e))?,
        g,
    )?)
}

fn real_epsilon(a: &PtPartnerArgs) -> CliResult<Option<f64>> {
    match &a.epsilon {
        None => Ok(None),
        Some(s) => {
            let e = parse_complex("epsilon", s)?;
            if e.im != 0.0 {
                return Err(CliError::Usage(format!(
                    "--epsilon must be real for case {:?}",
                    a.case
                )));
            }
            Ok(Some(e.re))
        }
    }
}

fn transform(
    a: &PtPartnerArgs,
    p: PTParams<f64>,
    model: &susyqm::model::PotentialModel<f64>,
) -> CliResult<PartnerResult<f64>> {
    let g = *model.grid();
    let first = |a: &PtPartnerArgs| -> CliResult<SeedSolution<f64>> {
        real_seed(
            p,
            g,
            SeedChoice {
                epsilon: real_epsilon(a)?,
                q: a.q,
                level: a.level,
            },
            a,
            "epsilon",
        )
    };
    Ok(match a.case {
        PtCase::DeleteGround => first_order_partner(model, &pt_eigen_seed(p, 0, g)?)?,
        PtCase::First => first_order_partner(model, &first(a)?)?,
        PtCase::Real => {
            let second = real_seed(
                p,
                g,
                SeedChoice {
                    epsilon: a.epsilon2,
                    q: a.q2,
                    level: a.level2,
                },
                a,
                "epsilon2",
            )?;
            second_order_real(model, &first(a)?, &second)?
        }
        PtCase::Confluent => {
            let w0 = require("w0", a.w0, "for the confluent case")?;
            second_order_confluent(model, &first(a)?, w0, a.x0)?
        }
        PtCase::Complex => {
            let e = parse_complex(
                "epsilon",
                require("epsilon", a.epsilon.as_deref(), "for the complex case")?,
            )?;
            if e.im == 0.0 {
                return Err(CliError::Usage("the complex case needs Im ε ≠ 0".into()));
            }
            second_order_complex(
                model,
                &pt_general_solution(p, PTSeedRecipe::regular_at_origin(p, e)?, g)?,
            )?
        }
        PtCase::Move => {
            let n = require("level", a.level, "for the move case")?;
            let to = require("epsilon", real_epsilon(a)?, "for the move case")?;
            move_level(model, &pt_eigen_seed(p, n, g)?, to)?
        }
    })
}

pub fn run(a: &PtPartnerArgs) -> CliResult<Report> {
    let p = PTParams::new(a.lambda, a.nu)?;
    if let Some(order) = a.order {
        if order != a.case.order() {
            return Err(CliError::Usage(format!(
                "case {:?} is a transformation of order {}, not {order}",
                a.case,
                a.case.order()
            )));
        }
    }
    let model = pt_model(p, pt_grid(a.seed_grid)?)?;
    let partner = transform(a, p, &model)?;

    let mut report = Report::default();
    report.line("potential", &model.label);
    report.line("transformation", &partner.potential.label);
    report.line("order", partner.order);
    report.line("spectral change", partner.spectral_change);
    for s in &partner.new_states {
        report.line(
            "new state",
            format!("ε = {}, normalizable = {}", s.energy, s.normalizable),
        );
    }
    for w in &partner.warnings {
        report.line("warning", w);
    }
    let (e0, e1, e2) = (
        pt_eigenvalue(p, 0),
        pt_eigenvalue(p, 1),
        pt_eigenvalue(p, 2),
    );
    let energies = [0.85 * e0, 0.5 * (e0 + e1), 0.5 * (e1 + e2)];
    let residual = verify_intertwining(&model, &partner, &energies)?;
    report.check(Check::at_most(
        "intertwining residual",
        residual,
        INTERTWINING_THRESHOLD,
    ));
    if a.case == PtCase::Complex {
        report.check(Check::at_most(
            "imaginary residue of V2",
            partner.imag_residue,
            IMAG_RESIDUE_THRESHOLD,
        ));
    }

    let g = *model.grid();
    let mut t = Table::new();
    t.push("x", g.to_vec());
    t.push("V0", g.nodes().map(|x| model.value(x).0).collect());
    t.push(
        format!("V{}", partner.order),
        real_parts(&partner.v_new().values),
    );
    for (k, s) in partner
        .new_states
        .iter()
        .filter(|s| s.normalizable)
        .enumerate()
    {
        t.push(format!("psi_new_{}", k + 1), real_parts(&s.state.values));
    }
    report.table("partner", t);
    Ok(report)
}
