use clap::{Args, ValueEnum};
use serde::Serialize;
use susyqm::algebra_cs::{
    coherent_coefficients, eigenvalue_residual, evolution_check, kernel_degeneracy, linear_kernel,
    reproducing_kernel, LadderKind, LadderSpec, SpectrumFunction, DEFAULT_TOLERANCE,
};
use susyqm::poschl_teller::PTParams;
use susyqm::{cx, Cx};

use super::{parse_complex, require};
use crate::error::{CliError, CliResult};
use crate::output::Table;
use crate::{Check, OutputArgs, Report};

pub const EIGEN_THRESHOLD: f64 = 1e-8;
pub const EVOLUTION_THRESHOLD: f64 = 1e-10;
pub const KERNEL_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumKind {
    /// `E_n = n + 1/2`.
    Oscillator,
    /// Trigonometric Pöschl-Teller with --lambda and --nu.
    Pt,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CoherentArgs {
    #[arg(long, value_enum)]
    pub spectrum: SpectrumKind,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub nu: Option<f64>,
    /// intrinsic, linear or natural.
    #[arg(long)]
    #[serde(serialize_with = "as_display")]
    pub kind: LadderKind,
    /// First new level of the second-order partner; with --epsilon2, the
    /// ladder acts on the partner Hamiltonian.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub epsilon2: Option<f64>,
    /// Complex as a+bi.
    #[arg(long, default_value = "1")]
    pub z: String,
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tol: f64,
    /// Evolution time for the stability check.
    #[arg(long, default_value_t = 0.1)]
    pub time: f64,
    /// Kernel table spans real z' in [-zmax, zmax].
    #[arg(long, default_value_t = 2.0)]
    pub zmax: f64,
    #[arg(long, default_value_t = 21)]
    pub zgrid: usize,
    /// Basis size for the kernel-degeneracy count.
    #[arg(long, default_value_t = 40)]
    pub dim: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn as_display<S: serde::Serializer>(k: &LadderKind, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(k)
}

fn spec(a: &CoherentArgs) -> CliResult<LadderSpec<f64>> {
    let spectrum = match a.spectrum {
        SpectrumKind::Oscillator => SpectrumFunction::oscillator(),
        SpectrumKind::Pt => {
            let why = "for the Pöschl-Teller spectrum";
            SpectrumFunction::poschl_teller(PTParams::new(
                require("--lambda", a.lambda, why)?,
                require("--nu", a.nu, why)?,
            )?)
        }
    };
    let new_levels = match (a.epsilon, a.epsilon2) {
        (Some(e1), Some(e2)) => Some((e1, e2)),
        (None, None) => None,
        _ => {
            return Err(CliError::Usage(
                "--epsilon and --epsilon2 must be given together".into(),
            ))
        }
    };
    Ok(LadderSpec::new(a.kind, a.alpha, spectrum, new_levels)?)
}

pub fn run(a: &CoherentArgs) -> CliResult<Report> {
    if a.zgrid < 2 || !(a.zmax > 0.0) {
        return Err(CliError::Usage(format!(
            "need --zgrid ≥ 2 and --zmax > 0 (got {}, {})",
            a.zgrid, a.zmax
        )));
    }
    let spec = spec(a)?;
    let z = parse_complex("--z", &a.z)?;
    let cs = coherent_coefficients(&spec, z, a.tol)?;

    let mut report = Report::default();
    report.line("spectrum", &spec.spectrum.label);
    report.line("kind", spec.kind);
    report.line("z", z);
    report.line("truncation", cs.truncation);
    report.line("norm residual", format!("{:.3e}", cs.norm_residual));
    report.line("kernel degeneracy", kernel_degeneracy(&spec, a.dim)?);
    report.check(Check::at_most(
        "eigenvalue residual",
        eigenvalue_residual(&spec, &cs)?,
        EIGEN_THRESHOLD,
    ));
    report.check(Check::at_most(
        "evolution",
        evolution_check(&spec, z, a.time, a.tol)?,
        EVOLUTION_THRESHOLD,
    ));

    let zs: Vec<Cx<f64>> = (0..a.zgrid)
        .map(|i| cx(-a.zmax + 2.0 * a.zmax * i as f64 / (a.zgrid - 1) as f64))
        .collect();
    let kernel = zs
        .iter()
        .map(|&zp| reproducing_kernel(&spec, z, zp))
        .collect::<Result<Vec<_>, _>>()?;
    if spec.kind == LadderKind::Linear && spec.new_levels.is_none() {
        let err = zs
            .iter()
            .zip(&kernel)
            .map(|(&zp, k)| (k - linear_kernel(z, zp)).norm())
            .fold(0.0, f64::max);
        report.check(Check::at_most("kernel closed form", err, KERNEL_THRESHOLD));
    }

    let c = &cs.coefficients;
    let mut t = Table::new();
    t.push("m", (0..c.len()).map(|m| m as f64).collect());
    t.push("E_m", (0..c.len()).map(|m| spec.energy(m)).collect());
    t.push("re", c.iter().map(|v| v.re).collect());
    t.push("im", c.iter().map(|v| v.im).collect());
    t.push("abs", c.iter().map(|v| v.norm()).collect());
    t.push("abs2", c.iter().map(|v| v.norm_sqr()).collect());
    report.table("coefficients", t);
    let mut k = Table::new();
    k.push("zp_re", zs.iter().map(|v| v.re).collect());
    k.push("zp_im", zs.iter().map(|v| v.im).collect());
    k.push("K_re", kernel.iter().map(|v| v.re).collect());
    k.push("K_im", kernel.iter().map(|v| v.im).collect());
    k.push("K_abs", kernel.iter().map(|v| v.norm()).collect());
    report.table("kernel", k);
    Ok(report)
}
