use thiserror::Error;

/// Errors raised by the transformation engine and its numerical substrate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SusyError {
    /// The seed (first order), the Wronskian (real second order) or the
    /// function `w` (confluent and complex second order) vanishes inside the
    /// domain, so the partner potential would acquire a new singularity.
    #[error("singular transformation: {what} vanishes near x = {location:.6}")]
    SingularTransform { what: String, location: f64 },

    /// Confluent transformation with an inadmissible `w0`.
    #[error("singular confluent transformation: w has a node near x = {location:.6}; admissible w0: {admissible}")]
    SingularConfluent { location: f64, admissible: String },

    /// A model or transformation parameter violates its stated bound.
    #[error("parameter out of range: {0}")]
    ParameterBounds(String),

    /// Parameters hit a degenerate configuration (e.g. a Gamma pole in a
    /// prefactor of the general solution).
    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    /// The seed's boundary behaviour contradicts its energy.
    #[error("inconsistent seed: {0}")]
    InconsistentSeed(String),

    /// Division by `E - epsilon` with `E == epsilon`.
    #[error("energy {0} coincides with a factorization energy")]
    CoincidentEnergy(f64),

    /// The integrator lost accuracy (e.g. transfer-matrix determinant drift).
    #[error("integrator accuracy: {0}")]
    IntegratorAccuracy(String),

    /// A series or iteration failed to converge.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// Grid or sample layout mismatch.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, SusyError>;
