use thiserror::Error;

/// Failure modes shared by every computation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// Input could not be interpreted (unknown unit, malformed grid, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// The trial frequencies describe a degenerate oscillator.
    #[error("singular configuration: {0}")]
    Singular(String),
    /// A numerical procedure did not reach its tolerance.
    #[error("numerical failure: {message} ({diagnostics})")]
    Numerical { message: String, diagnostics: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>, diagnostics: impl Into<String>) -> Self {
        Error::Numerical {
            message: msg.into(),
            diagnostics: diagnostics.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
