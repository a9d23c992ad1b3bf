use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter is outside its admissible range. `field` names the offending
    /// configuration path.
    #[error("invalid configuration `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("dimension mismatch: expected {expected} amplitudes, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// A computed quantity violated a mathematical guarantee (negative QFI,
    /// QFI above the seminorm ceiling, non-finite amplitudes).
    #[error("numerical integrity violation: {0}")]
    NumericalIntegrity(String),

    #[error("threshold not bracketed: {0}")]
    ThresholdNotBracketed(String),

    /// Input outside a function's mathematical domain, e.g. nonpositive values
    /// handed to a log-log fit.
    #[error("domain error: {0}")]
    Domain(String),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
