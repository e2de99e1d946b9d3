use susyqm::SusyError;
use thiserror::Error;

/// Failure classes, each with its own exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config entries or parameter bounds.
    #[error("{0}")]
    Usage(String),
    /// The requested transformation is singular.
    #[error("{0}")]
    Singular(String),
    /// The computation ran but a verification check failed.
    #[error("verification failed: {0}")]
    Verification(String),
    /// Series or integrator failure.
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
    /// `--help` or `--version` output.
    #[error("{0}")]
    Help(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Singular(_) => 3,
            CliError::Verification(_) => 4,
            CliError::Numerical(_) => 5,
            CliError::Io(_) => 6,
            CliError::Help(_) => 0,
        }
    }
}

impl From<SusyError> for CliError {
    fn from(e: SusyError) -> Self {
        let msg = e.to_string();
        match e {
            SusyError::ParameterBounds(_)
            | SusyError::InvalidInput(_)
            | SusyError::InconsistentSeed(_) => CliError::Usage(msg),
            SusyError::SingularTransform { .. }
            | SusyError::SingularConfluent { .. }
            | SusyError::CoincidentEnergy(_)
            | SusyError::Degenerate(_) => CliError::Singular(msg),
            SusyError::NoConvergence(_) | SusyError::IntegratorAccuracy(_) => {
                CliError::Numerical(msg)
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
