use thiserror::Error;

/// Errors raised by constructors and operations in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unsupported dimension {0} (must be in 1..=8)")]
    Dimension(usize),

    #[error("coordinate {0} is outside [0, 1)")]
    CoordinateRange(f64),

    #[error("direction is not unit length (norm {0})")]
    NotUnit(f64),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("empty input")]
    Empty,

    #[error("construction too large: {0}")]
    TooLarge(String),

    #[error("invalid ordering id")]
    InvalidOrdering,

    #[error("duplicate point id {0}")]
    DuplicateId(u64),

    #[error("unknown point id {0}")]
    UnknownId(u64),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("bad family file: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}
