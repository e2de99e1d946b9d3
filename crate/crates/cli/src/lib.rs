//! `susy`: partner potentials, band structure, Lamé transformations and
//! coherent states from the command line, emitted as CSV or JSON tables.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

pub use error::{CliError, CliResult};
use output::{sibling_path, write_table, Format, Table};

#[derive(Debug, Parser)]
#[command(
    name = "susy",
    version,
    about = "SUSY partner potentials, Floquet bands and coherent states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// First- or second-order partner of a trigonometric Pöschl-Teller potential.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    PtPartner(commands::pt_partner::PtPartnerArgs),
    /// Discriminant scan and band edges of a periodic potential.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Bands(commands::bands::BandsArgs),
    /// SUSY partners of the n = 1 Lamé potential.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    LameSusy(commands::lame_susy::LameSusyArgs),
    /// Coherent states of the intrinsic, linear and natural algebras.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Coherent(commands::coherent::CoherentArgs),
}

/// Output flags shared by every command.
#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    /// Primary output file; further tables go next to it as `<stem>_<name>.<ext>`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Defaults to the extension of `--out` (csv unless `.json`).
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// `key = value` file supplying flags; explicit flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// A verification against a threshold.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `value ≤ threshold`.
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            pass: value <= threshold,
        }
    }

    /// Passes when `value == expected`.
    pub fn equals(name: impl Into<String>, value: f64, expected: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold: expected,
            pass: value == expected,
        }
    }
}

/// What a command produced: summary lines, checks and tables. The first
/// table goes to `--out`, the others to sibling files named by their key.
#[derive(Debug, Default)]
pub struct Report {
    pub summary: Vec<(String, String)>,
    pub checks: Vec<Check>,
    pub tables: Vec<(String, Table)>,
}

impl Report {
    pub fn line(&mut self, key: impl Into<String>, value: impl ToString) {
        self.summary.push((key.into(), value.to_string()));
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn table(&mut self, name: impl Into<String>, t: Table) {
        self.tables.push((name.into(), t));
    }

    pub fn failed(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

fn emit(
    report: &Report,
    name: &str,
    config: Value,
    output: &OutputArgs,
    out: &mut dyn Write,
) -> CliResult<()> {
    for (k, v) in &report.summary {
        writeln!(out, "{k}: {v}")?;
    }
    for c in &report.checks {
        let verdict = if c.pass { "ok" } else { "FAIL" };
        writeln!(
            out,
            "check {}: {:e} (threshold {:e}) {verdict}",
            c.name, c.value, c.threshold
        )?;
    }
    if let Some(path) = &output.out {
        let format = output.format.unwrap_or_else(|| Format::for_path(path));
        let summary: serde_json::Map<String, Value> = report
            .summary
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        let meta = json!({ "command": name, "config": config, "summary": summary, "checks": report.checks });
        for (i, (table_name, table)) in report.tables.iter().enumerate() {
            let p = if i == 0 {
                path.clone()
            } else {
                sibling_path(path, table_name)
            };
            write_table(&p, format, &meta, table)?;
            writeln!(out, "wrote {}", p.display())?;
        }
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command and writes its
/// summary to `out`.
pub fn run(args: Vec<OsString>, out: &mut dyn Write) -> CliResult<Report> {
    let args = config::expand_config(args)?;
    let cli = Cli::try_parse_from(args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
            CliError::Help(e.to_string())
        }
        _ => CliError::Usage(
            e.to_string()
                .trim_start_matches("error: ")
                .trim_end()
                .to_string(),
        ),
    })?;
    let (report, name, config, output) = match &cli.command {
        Command::PtPartner(a) => (
            commands::pt_partner::run(a)?,
            "pt-partner",
            serde_json::to_value(a)?,
            &a.output,
        ),
        Command::Bands(a) => (
            commands::bands::run(a)?,
            "bands",
            serde_json::to_value(a)?,
            &a.output,
        ),
        Command::LameSusy(a) => (
            commands::lame_susy::run(a)?,
            "lame-susy",
            serde_json::to_value(a)?,
            &a.output,
        ),
        Command::Coherent(a) => (
            commands::coherent::run(a)?,
            "coherent",
            serde_json::to_value(a)?,
            &a.output,
        ),
    };
    emit(&report, name, config, output, out)?;
    let failed = report.failed();
    if !failed.is_empty() {
        let names: Vec<&str> = failed.iter().map(|c| c.name.as_str()).collect();
        return Err(CliError::Verification(names.join(", ")));
    }
    Ok(report)
}

/// Entry point for the binary: returns the process exit code.
pub fn main_with(args: Vec<OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match run(args, out) {
        Ok(_) => 0,
        Err(CliError::Help(text)) => {
            let _ = write!(out, "{text}");
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
