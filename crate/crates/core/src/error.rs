use thiserror::Error;

/// Errors raised by matrix construction, means, representations and the
/// condition harness.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("empty input")]
    Empty,

    #[error("matrix is not positive definite (smallest eigenvalue {min_eig:e})")]
    NotPositiveDefinite { min_eig: f64 },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eig:e})")]
    NotPositiveSemidefinite { min_eig: f64 },

    #[error("matrix is not an orthogonal projection (defect {defect:e})")]
    NotProjection { defect: f64 },

    #[error("eigenvalue {eigenvalue:e} lies outside the domain of {function}")]
    Domain { eigenvalue: f64, function: String },

    #[error("argument {value:e} lies outside the domain of {function}")]
    ScalarDomain { value: f64, function: String },

    #[error("eigen-solver failed for a {dim}x{dim} matrix: {detail}")]
    EigenFailure { dim: usize, detail: String },

    #[error("matrix is too ill-conditioned (condition number {cond:e}, cap {cap:e})")]
    IllConditioned { cond: f64, cap: f64 },

    #[error("{what} did not converge after {iterations} steps (last gap {gap:e})")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
        gap: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid representing function: {0}")]
    InvalidRepresentingFunction(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown mean identifier '{0}'")]
    UnknownMean(String),

    #[error("unknown function identifier '{0}'")]
    UnknownFunction(String),

    #[error("unknown condition identifier '{0}'")]
    UnknownCondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors caused by malformed identifiers or payloads rather
    /// than by the numerical content of valid inputs.
    pub fn is_parse_error(&self) -> bool {
        matches!(
            self,
            Error::UnknownMean(_)
                | Error::UnknownFunction(_)
                | Error::UnknownCondition(_)
                | Error::Parse(_)
                | Error::InvalidMeasure(_)
                | Error::InvalidParameter(_)
                | Error::NotSquare { .. }
                | Error::Empty
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
