use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside the domain of an operation (bad parameters, singular
    /// points inside a support, violated inequalities).
    #[error("domain error: {0}")]
    Domain(String),
    /// An iterative method failed. `trace` carries the last iterates or
    /// residuals for diagnosis.
    #[error("numeric error: {message}")]
    Numeric { message: String, trace: Vec<String> },
    /// A structural invariant of a value was violated.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>, trace: Vec<String>) -> Self {
        Error::Numeric {
            message: msg.into(),
            trace,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
