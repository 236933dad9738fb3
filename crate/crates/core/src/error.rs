//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Constructor preconditions violated (bad parameters, unordered pairs, ...).
    #[error("construction error: {0}")]
    Construction(String),

    /// A constructed distribution failed structural validation.
    #[error("invalid distribution `{name}`: {detail}")]
    InvalidDistribution { name: String, detail: String },

    /// An evaluation was called outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed distribution spec file.
    #[error("spec parse error: {0}")]
    Spec(String),

    /// Unknown scenario id or bad scenario parameter.
    #[error("scenario error: {0}")]
    Scenario(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Spec(e.to_string())
    }
}
