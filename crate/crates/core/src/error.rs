use thiserror::Error;

use crate::group::Family;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("group of order {order} exceeds the enumeration guard {guard}")]
    GroupTooLarge { order: u128, guard: u64 },

    #[error("operation `{operation}` is not supported for family {family:?}")]
    UnsupportedFamily { family: Family, operation: &'static str },

    #[error("invalid group element: {0}")]
    InvalidElement(String),

    #[error("invalid group spec: {0}")]
    InvalidSpec(String),

    #[error("composition is not representable as a single element: {0}")]
    NotRepresentable(String),

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("unsupported extension triple: {0}")]
    UnsupportedTriple(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("non-finite evaluation of `{label}` at {point:?}")]
    NonFinite { label: String, point: Vec<f64> },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
