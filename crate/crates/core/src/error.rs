use thiserror::Error;

/// Errors produced by the simulator, the oracles and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// Exhaustive enumeration refused; the caller should use a structured oracle.
    #[error("problem size {n} exceeds the exhaustive-search limit of {limit} spins")]
    SizeLimit { n: usize, limit: usize },

    #[error("unsupported coupling {value} between spins {i} and {k} (only -1 and 0 are allowed)")]
    UnsupportedCoupling { i: usize, k: usize, value: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NumericalFailure(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
