use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Serialize;
use susyqm::model::{DomainKind, PotentialModel};
use susyqm::numerics::calculus::derivative_4th;
use susyqm::numerics::interp::CubicTable;
use susyqm::periodic::{
    band_edges, discriminant_batch, lame_model, BandStructure, LameParams, Periodicity,
};
use susyqm::{cx, Grid};

use crate::error::{CliError, CliResult};
use crate::output::{read_table, Format, Table};
use crate::{OutputArgs, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PotentialKind {
    /// `n(n+1) m sn²(x|m) / 2`.
    Lame,
    /// `A sin²x`.
    Sin2,
    /// `V = 0` with period --period.
    Free,
    /// One period of samples from a CSV file with columns x, V.
    File,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BandsArgs {
    #[arg(long, value_enum)]
    pub potential: PotentialKind,
    /// Lamé parameter.
    #[arg(long)]
    pub m: Option<f64>,
    /// Lamé index.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Amplitude of the sin² potential.
    #[arg(long, default_value_t = 5.0)]
    pub amplitude: f64,
    /// Period of the free potential; for files, defaults to the sampled span.
    #[arg(long)]
    pub period: Option<f64>,
    #[arg(long)]
    pub file: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0)]
    pub emin: f64,
    #[arg(long, default_value_t = 12.0)]
    pub emax: f64,
    /// Energies in the D(E) table and in the edge scan.
    #[arg(long, default_value_t = 600)]
    pub points: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn one_cell(
    label: String,
    period: f64,
    eval: impl Fn(f64) -> (f64, f64) + Send + Sync + 'static,
) -> CliResult<PotentialModel<f64>> {
    Ok(PotentialModel::new(
        label,
        DomainKind::Periodic { period },
        Grid::new(0.0, period, 401)?,
        eval,
    )?)
}

fn file_model(path: &Path, period: Option<f64>) -> CliResult<PotentialModel<f64>> {
    let (t, _) = read_table(path, Format::for_path(path))?;
    let col = |n: &str| {
        t.columns
            .get(n)
            .cloned()
            .ok_or_else(|| CliError::Usage(format!("{}: missing column '{n}'", path.display())))
    };
    let (xs, vs) = (col("x")?, col("V")?);
    if xs.len() < 8 {
        return Err(CliError::Usage(format!(
            "{}: need at least 8 samples",
            path.display()
        )));
    }
    let g = Grid::new(xs[0], xs[xs.len() - 1], xs.len())?;
    if xs
        .iter()
        .enumerate()
        .any(|(i, &x)| (x - g.x(i)).abs() > 1e-9 * (1.0 + x.abs()))
    {
        return Err(CliError::Usage(format!(
            "{}: x must be uniformly spaced",
            path.display()
        )));
    }
    let period = period.unwrap_or(g.x_max() - g.x_min());
    let samples: Vec<_> = vs.iter().map(|&v| cx(v)).collect();
    let dv = derivative_4th(&samples, g.spacing())
        .iter()
        .map(|z| z.re)
        .collect();
    let table = CubicTable::new(g, vs, dv);
    let x0 = g.x_min();
    one_cell(
        format!("samples from {}", path.display()),
        period,
        move |x| {
            let t = x - x0;
            table.eval(x0 + t - (t / period).floor() * period)
        },
    )
}

pub fn build_model(a: &BandsArgs) -> CliResult<PotentialModel<f64>> {
    match a.potential {
        PotentialKind::Lame => {
            let m = a
                .m
                .ok_or_else(|| CliError::Usage("--m is required for the Lamé potential".into()))?;
            let p = LameParams::new(a.n, m)?;
            Ok(lame_model(p, Grid::new(0.0, p.period, 401)?)?)
        }
        PotentialKind::Sin2 => {
            let amp = a.amplitude;
            one_cell(
                format!("{amp} sin²x"),
                std::f64::consts::PI,
                move |x: f64| (amp * x.sin().powi(2), amp * (2.0 * x).sin()),
            )
        }
        PotentialKind::Free => {
            let period = a.period.unwrap_or(std::f64::consts::PI);
            if !(period > 0.0) {
                return Err(CliError::Usage(format!(
                    "--period must be positive (got {period})"
                )));
            }
            one_cell("free".into(), period, |_| (0.0, 0.0))
        }
        PotentialKind::File => {
            let path = a
                .file
                .as_ref()
                .ok_or_else(|| CliError::Usage("--file is required for --potential file".into()))?;
            file_model(path, a.period)
        }
    }
}

/// Gaps of nonzero width between two interior edges.
pub fn finite_gaps(b: &BandStructure<f64>) -> Vec<(f64, f64)> {
    b.gaps
        .iter()
        .copied()
        .filter(|&(lo, hi)| hi > lo && lo > b.range.0 && hi < b.range.1)
        .collect()
}

pub fn run(a: &BandsArgs) -> CliResult<Report> {
    if !(a.emin < a.emax) || a.points < 3 {
        return Err(CliError::Usage(format!(
            "need emin < emax and at least 3 points (got [{}, {}], {})",
            a.emin, a.emax, a.points
        )));
    }
    let model = build_model(a)?;
    let energies: Vec<f64> = (0..a.points)
        .map(|i| a.emin + (a.emax - a.emin) * i as f64 / (a.points - 1) as f64)
        .collect();
    let d = discriminant_batch(&model, &energies)?;
    let bands = band_edges(&model, (a.emin, a.emax), a.points)?;

    let mut report = Report::default();
    report.line("potential", &model.label);
    report.line("period", model.period().expect("periodic model"));
    let edges: Vec<String> = bands
        .edges
        .iter()
        .map(|e| {
            format!(
                "{:.10} ({}{})",
                e.energy,
                e.periodicity,
                if e.double_root { ", double" } else { "" }
            )
        })
        .collect();
    report.line(
        "band edges",
        if edges.is_empty() {
            "none".into()
        } else {
            edges.join(", ")
        },
    );
    let fmt = |v: &[(f64, f64)]| {
        v.iter()
            .map(|(a, b)| format!("[{a:.10}, {b:.10}]"))
            .collect::<Vec<_>>()
            .join(", ")
    };
    report.line("bands", fmt(&bands.bands));
    let gaps = finite_gaps(&bands);
    report.line(
        "finite gaps",
        if gaps.is_empty() {
            "none".into()
        } else {
            fmt(&gaps)
        },
    );

    let mut t = Table::new();
    t.push("E", energies).push("D", d);
    report.table("discriminant", t);
    let mut e = Table::new();
    e.push("energy", bands.edges.iter().map(|x| x.energy).collect());
    e.push(
        "periodicity",
        bands
            .edges
            .iter()
            .map(|x| {
                if x.periodicity == Periodicity::Periodic {
                    1.0
                } else {
                    -1.0
                }
            })
            .collect(),
    );
    e.push(
        "double_root",
        bands
            .edges
            .iter()
            .map(|x| f64::from(u8::from(x.double_root)))
            .collect(),
    );
    report.table("edges", e);
    Ok(report)
}
