use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point {0} lies outside [0,1]")]
    OutOfDomain(String),

    #[error("cannot parse scalar {0:?}")]
    ParseScalar(String),

    /// An operation whose result is not representable on the exact backend
    /// (transcendental functions, irrational roots).
    #[error("inexact operation on the rational backend: {0}")]
    Inexact(String),

    #[error("unsupported form: {0}")]
    UnsupportedForm(String),

    #[error("unsupported class: {0}")]
    UnsupportedClass(String),

    #[error("monotonicity violated between t={lo} and t={hi}")]
    MonotonicityViolated { lo: String, hi: String },

    #[error("no convergence after {depth} refinement levels")]
    NoConvergence { depth: u32 },

    #[error("malformed document: {0}")]
    Document(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
        if expected == found {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, found })
        }
    }
}
