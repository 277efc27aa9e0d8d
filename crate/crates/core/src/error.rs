use alloc::string::String;

/// Errors produced by the toolkit.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A scalar argument is outside its admissible range.
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    /// Dimensions of the operands do not fit together.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Argument outside the range where a covering bound applies.
    #[error("outside domain: {0}")]
    Domain(String),

    /// A structural precondition (unitarity, hermiticity, ...) does not hold.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Training produced a non-finite loss.
    #[error("training diverged at step {step}: {reason}")]
    Divergence { step: usize, reason: String },
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }
}
