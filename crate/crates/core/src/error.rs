use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported root system {kind}{rank}")]
    UnsupportedRootSystem { kind: String, rank: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{0} is not a coweight (coordinates must be integers)")]
    NotACoweight(String),
    #[error("unsupported residue field size q={0} (need a prime 2 <= q <= 13)")]
    UnsupportedField(u32),
    #[error("field mismatch: q={0} vs q={1}")]
    FieldMismatch(u8, u8),
    #[error("singular matrix")]
    SingularMatrix,
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("size guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
