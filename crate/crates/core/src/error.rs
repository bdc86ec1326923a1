use thiserror::Error;

use crate::report::VerificationReport;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    VarMismatch { left: usize, right: usize },

    #[error("index {index} out of range for {bound} {what}")]
    IndexOutOfRange {
        index: usize,
        bound: usize,
        what: &'static str,
    },

    #[error("frame mismatch: {0}")]
    FrameMismatch(String),

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid structure: {0}")]
    Invalid(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// Inconsistent input data detected by a verification pipeline.
    #[error("verification failed: {}", .0.summary())]
    Verification(Box<VerificationReport>),

    /// Two routes that must agree symbolically disagreed; this is a sign-convention bug.
    #[error("internal consistency violation: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
