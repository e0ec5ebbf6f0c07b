use alloc::string::String;

/// Errors raised when an input violates the algebraic contract of an
/// operation. Values are never silently repaired.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension must be even and at least 2, got {0}")]
    InvalidDimension(usize),

    #[error("matrix is not skew-symmetric (max |a + a^T| = {residual:e})")]
    NotSkew { residual: f64 },

    #[error("matrix is not symmetric (max |a - a^T| = {residual:e})")]
    NotSymmetric { residual: f64 },

    #[error("not a complex structure: max |J^2 + Id| = {residual:e}")]
    NotComplexStructure { residual: f64 },

    #[error("not tangent at J: max |JV + VJ| = {residual:e}")]
    NotTangent { residual: f64 },

    #[error("frame violates {identity} (residual {residual:e})")]
    BadFrame { identity: String, residual: f64 },

    #[error("2-vector is not of pure {expected} type (opposite half norm {residual:e})")]
    MixedType {
        expected: &'static str,
        residual: f64,
    },

    #[error("2-vector must have unit norm, got {norm}")]
    NotUnit { norm: f64 },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid model {name}: {reason}")]
    InvalidModel { name: &'static str, reason: String },

    #[error("unknown {kind} `{value}`")]
    Unknown { kind: &'static str, value: String },
}

pub type Result<T> = core::result::Result<T, Error>;
