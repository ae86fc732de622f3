use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("valuation budget exceeded: need {needed}, budget {budget}")]
    ValuationBudgetExceeded { needed: u32, budget: u32 },
    #[error("division not exact: {0}")]
    DivisionNotExact(String),
    #[error("operation needs a (q-1)-truncated coefficient ring")]
    NeedsTruncation,
    #[error("witness construction failed: {0}")]
    Construction(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Core(#[from] qcore::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
