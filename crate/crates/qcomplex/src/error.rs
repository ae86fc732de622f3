use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("décalage needs a torsion-free ambient (polynomial base), got {0}")]
    TorsionAmbient(String),
    #[error("insufficient truncation: need (q-1)-length > {needed}, got {got}")]
    InsufficientTruncation { needed: u32, got: u32 },
    #[error("{d} does not divide {m}")]
    NotADivisor { d: u64, m: u64 },
    #[error("base mismatch: {0}")]
    BaseMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Core(#[from] qcore::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
