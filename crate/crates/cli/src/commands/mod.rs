pub mod bands;
pub mod coherent;
pub mod lame_susy;
pub mod pt_partner;

use susyqm::Cx;

use crate::error::{CliError, CliResult};

/// `a`, `bi` or `a+bi`.
pub(crate) fn parse_complex(flag: &str, s: &str) -> CliResult<Cx<f64>> {
    s.trim().parse::<Cx<f64>>().map_err(|_| {
        CliError::Usage(format!(
            "--{flag}: '{s}' is not a number (expected a, bi or a+bi)"
        ))
    })
}

pub(crate) fn require<T: Copy>(flag: &str, v: Option<T>, why: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required {why}")))
}

pub(crate) fn real_parts(v: &[Cx<f64>]) -> Vec<f64> {
    v.iter().map(|z| z.re).collect()
}
