use thiserror::Error;

/// Errors raised by the library.
///
/// `Validation` covers malformed or inconsistent input; everything else is a
/// failure of a computation on otherwise valid input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),

    #[error("computation failed: {0}")]
    Computation(String),

    #[error("no stable lattice within bounds: {0}")]
    NoStableLattice(String),

    #[error("Hilbert symbol undetermined at {0}")]
    UndeterminedSymbol(String),

    #[error("pole: factor vanishes for geodesic {0}")]
    Pole(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn computation(msg: impl Into<String>) -> Self {
        Error::Computation(msg.into())
    }

    /// Process exit code used by the CLI: 2 for bad input, 3 for failed computations.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) | Error::Json(_) | Error::Io(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
