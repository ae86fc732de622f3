use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("the zero element has no Nygaard level")]
    ZeroElement,
    #[error("insufficient truncation: {0}")]
    InsufficientTruncation(String),
    #[error("valuation budget exceeded: need {needed}, budget {budget}")]
    ValuationBudgetExceeded { needed: u32, budget: u32 },
    #[error("division not exact: {0}")]
    DivisionNotExact(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Core(#[from] qcore::Error),
    #[error(transparent)]
    Delta(deltaq::Error),
}

impl From<deltaq::Error> for Error {
    fn from(e: deltaq::Error) -> Self {
        match e {
            deltaq::Error::ValuationBudgetExceeded { needed, budget } => Error::ValuationBudgetExceeded { needed, budget },
            other => Error::Delta(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
