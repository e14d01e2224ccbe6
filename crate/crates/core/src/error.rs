use thiserror::Error;

/// Errors raised by the evaluation pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested accuracy is below what double-precision evaluation can certify.
    #[error("precision error: requested {requested:e}, achievable {achieved:e}")]
    Precision { requested: f64, achieved: f64 },

    /// The series could not be certified within the term budget.
    #[error("capacity error: {0}")]
    Capacity(String),

    /// Cone parameters violate `c > -((n-2)/2)^2` or another structural constraint.
    #[error("invalid cone parameters: {0}")]
    InvalidParams(String),

    /// The configuration falls in a regime excluded by the asymptotic analysis.
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    /// Malformed input to a harness routine.
    #[error("input error: {0}")]
    Input(String),

    /// Reading or writing a table or report failed.
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
