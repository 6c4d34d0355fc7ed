use thiserror::Error;

use crate::field::FieldSpec;

#[derive(Debug, Error)]
pub enum Error {
    #[error("mixed-field operands: {0} and {1}")]
    FieldMismatch(FieldSpec, FieldSpec),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("radical unavailable: trace-form method needs characteristic 0 or p > {dim} (got {field}); supply the radical explicitly")]
    RadicalUnavailable { field: FieldSpec, dim: usize },

    #[error("field too small: {0}")]
    FieldTooSmall(String),

    #[error("endomorphism ring does not split over {0}; an extension field is required")]
    NotSplit(FieldSpec),

    #[error("enumeration budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("not implemented: {0}")]
    Unsupported(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
