use thiserror::Error;

use crate::algebra::FieldTag;

/// Errors raised by the algebra, triple and certification layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("field mismatch: {left:?} vs {right:?}")]
    FieldMismatch { left: FieldTag, right: FieldTag },

    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("matrix is not skew-Hermitian (residual {residual:e})")]
    NotSkewHermitian { residual: f64 },

    #[error("matrix is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },

    #[error("entry has components outside the {field:?} field")]
    OutsideField { field: FieldTag },

    #[error("element lies outside the ambient algebra (residual {residual:e})")]
    OutsideAlgebra { residual: f64 },

    #[error("subspace containment violated: {what} (residual {residual:e})")]
    Containment { what: &'static str, residual: f64 },

    #[error("deformation parameter t = {0} is outside (0, 1)")]
    InvalidDeformation(f64),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("null-space dimension is ambiguous: singular value {value:e} falls in the gap ({low:e}, {high:e})")]
    Degenerate { value: f64, low: f64, high: f64 },

    #[error("malformed document: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse(err.to_string())
    }
}
