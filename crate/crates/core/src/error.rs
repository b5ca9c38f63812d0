use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum MarcError {
    /// A precondition on variables, shapes or alphabets was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// A table failed its normalization check.
    #[error("normalization failed for {what}: max residual {residual:.3e}")]
    Normalization { what: String, residual: f64 },

    /// A simulation or search configuration cannot be executed as given.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = MarcError> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(MarcError::Domain(msg.into()))
}
