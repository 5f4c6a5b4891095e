use thiserror::Error;

/// Errors surfaced by the symbolic engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("division by zero in the coefficient ring")]
    DivisionByZero,

    #[error("denominator vanishes at the evaluation point")]
    Pole,

    #[error("mismatch: {0}")]
    Mismatch(String),

    #[error("form is not horizontal: {0}")]
    NonHorizontal(String),

    #[error("algebra has no structure block")]
    MissingStructure,

    #[error("Nijenhuis tensor is not totally skew-symmetric: {0}")]
    NonSkewNijenhuis(String),

    #[error("anomaly cancellation has no finite alpha': {0}")]
    NoAlphaPrime(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub fn mismatch(msg: impl Into<String>) -> Self {
        Error::Mismatch(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
