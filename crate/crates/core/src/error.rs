use thiserror::Error;

/// Errors raised by graph construction, complex manipulation and the Morse engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource limit exceeded: {what} (bound {bound})")]
    ResourceLimit { what: String, bound: u64 },

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("invalid chain complex: boundary composition d{dim}*d{} is nonzero", dim + 1)]
    InvalidChain { dim: usize },

    #[error("internal consistency error: {0}")]
    InternalConsistency(String),

    #[error("lemma violation: {0}")]
    LemmaViolation(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
