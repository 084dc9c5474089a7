use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("all weights are zero")]
    AllZero,
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("negative value {value} for {what}")]
    Negative { what: &'static str, value: f64 },
    #[error("{what} = {value} is outside {range}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("invalid alpha: {0}")]
    InvalidAlpha(String),
    #[error("distributions have different supports: {0} vs {1}")]
    SupportMismatch(usize, usize),
    #[error("empty batch")]
    EmptyBatch,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("training diverged at generator step {step}: {reason}")]
    Diverged { step: usize, reason: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
