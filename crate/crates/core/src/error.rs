use thiserror::Error;

/// Error type shared by all modules.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Stable-index / dimension parameters are out of range.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A point has the wrong number of coordinates.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A domain specification failed structural validation.
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    /// The requested operation needs a bounded domain.
    #[error("unbounded domain: {0}")]
    Unbounded(String),

    /// A precondition that must hold before any sampling starts.
    #[error("precondition failed: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
