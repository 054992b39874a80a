use thiserror::Error;

use crate::algebra::{Element, ValidationReport};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The input table is malformed independently of the effect-algebra axioms.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("table violates the effect-algebra axioms: {}", .0.summary())]
    Axioms(Box<ValidationReport>),

    #[error("carrier of {size} elements exceeds the cap of {cap}")]
    CarrierTooLarge { size: usize, cap: usize },

    #[error("element {below:?} is not below {above:?}")]
    NotBelow { below: Element, above: Element },

    #[error("family is not summable; the first {} elements already fail", .prefix.len())]
    NotSummable { prefix: Vec<Element> },

    #[error("closure exceeded the cap of {cap} elements")]
    ClosureOverflow { cap: usize },

    #[error("search budget of {budget} exceeded in {what}")]
    BudgetExceeded { what: &'static str, budget: u64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn is_structural(&self) -> bool {
        matches!(
            self,
            Error::Structural(_) | Error::Parse(_) | Error::Json(_) | Error::InvalidArgument(_)
        )
    }
}
