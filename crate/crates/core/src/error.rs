use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("factorization incomplete: cofactor {0} could not be split within budget")]
    Indeterminate(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("field too large for this operation: {size} elements exceeds cap {cap}")]
    SizeCap { size: String, cap: String },

    #[error("evaluation at a pole")]
    Pole,

    #[error("element is zero")]
    ZeroElement,

    #[error("element is not normal")]
    NotNormal,

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("sieve weight is not positive (delta <= 0){0}")]
    NonPositiveDelta(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
