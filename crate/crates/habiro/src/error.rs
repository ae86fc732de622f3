use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index set is not divisor-closed: {0}")]
    NotDivisorClosed(String),
    #[error("{0} is not in the index set")]
    MissingIndex(u64),
    #[error("{d} does not divide {m}")]
    NotADivisor { d: u64, m: u64 },
    #[error("presentation is not q-degree-bounded: entry spans {span} > {cap}")]
    UnboundedDegree { span: i64, cap: i64 },
    #[error("g'(x) is not invertible modulo ({p}, g): not etale at {p}")]
    NonEtaleAtP { p: u64 },
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("components are incompatible along the gluing at p = {p} from {d}")]
    IncompatibleComponents { p: u64, d: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Core(#[from] qcore::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
