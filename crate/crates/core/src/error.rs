use thiserror::Error;

/// Errors raised by the channel model, the rate optimizer and the tooling around them.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("effective memory M = {required} exceeds the configured cap of {cap}")]
    MemoryOverflow { required: usize, cap: usize },

    #[error("history width {got} does not match channel memory width {expected}")]
    HistoryWidth { expected: usize, got: usize },

    #[error("stationary distribution undefined for p = q = 0")]
    UndefinedStationary,

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("{0}")]
    CheckFailed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Short machine-readable tag used by the command-line error line.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::Domain(_) => "domain",
            Error::MemoryOverflow { .. } => "memory_overflow",
            Error::HistoryWidth { .. } => "history_width",
            Error::UndefinedStationary => "undefined_stationary",
            Error::InsufficientSamples(_) => "insufficient_samples",
            Error::Config { .. } => "config",
            Error::CheckFailed(_) => "check_failed",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
