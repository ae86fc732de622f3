use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division not exact: {0}")]
    DivisionNotExact(String),
    #[error("element is not a unit at the stated precision")]
    NotAUnit,
    #[error("index mismatch: {0}")]
    IndexMismatch(String),
    #[error("insufficient input precision: need length {needed}, got {got}")]
    InsufficientInputPrecision { needed: usize, got: usize },
    #[error("precision mismatch between operands")]
    PrecisionMismatch,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
