use thiserror::Error;

/// Errors shared across the attack, predictor and certification modules.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("index {index} out of range in {context} (limit {limit})")]
    IndexOutOfRange {
        context: &'static str,
        index: usize,
        limit: usize,
    },
    #[error("gradient predictor required for predicted or mixed gradient source")]
    MissingPredictor,
    #[error("singular matrix in {context}")]
    SingularMatrix { context: &'static str },
    #[error("empty input in {context}")]
    EmptyInput { context: &'static str },
}

impl CoreError {
    pub fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        CoreError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, CoreError>;
