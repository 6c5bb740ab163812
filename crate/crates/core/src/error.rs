use thiserror::Error;

/// Error type shared by all layers of the engine.
#[derive(Debug, Error)]
pub enum Error {
    /// Matrix outside the principal-branch neighborhood of the log.
    #[error("matrix log domain error: {0}")]
    Domain(String),
    /// Ideal / degenerate geometric configuration.
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    /// Generic numerical failure (division by a vanishing quantity, ...).
    #[error("numerical error: {0}")]
    Numerical(String),
    /// Geometric construction failed (overlap, routing, disjointness).
    #[error("geometry error: {0}")]
    Geometry(String),
    /// A paper-guaranteed invariant failed on valid input.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    /// Operation precondition violated by the caller.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Field evaluation requested too close to a pole.
    #[error("evaluation within exclusion radius of a pole: {0}")]
    Pole(String),
    /// ODE step error estimate could not be brought under tolerance.
    #[error("ODE transport error: {0}")]
    Step(String),
    /// Monodromy landed outside the log branch domain (τ too large).
    #[error("monodromy outside log branch domain (reduce tau): {0}")]
    LogBranch(String),
    /// Newton iteration did not reach the residual tolerance.
    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },
    /// Input validation (file parsing, parameter ranges).
    #[error("validation error: {0}")]
    Validation(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Exit-code class: 2 validation, 3 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_)
            | Error::Precondition(_)
            | Error::Degenerate(_)
            | Error::Io(_)
            | Error::Json(_) => 2,
            _ => 3,
        }
    }
}
