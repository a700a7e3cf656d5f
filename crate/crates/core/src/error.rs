use std::fmt;

/// Library-wide error type.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside a function's domain (named in the message).
    Domain(String),
    /// Parameters violate a model invariant (named in the message).
    InvalidParams(String),
    /// An iterative routine exhausted its budget before reaching tolerance.
    NonConvergence(String),
    /// A root bracket does not enclose a sign change.
    InvalidBracket(String),
    /// Not enough data to carry out an estimate.
    InsufficientData(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::InvalidParams(m) => write!(f, "invalid parameters: {m}"),
            Error::NonConvergence(m) => write!(f, "failed to converge: {m}"),
            Error::InvalidBracket(m) => write!(f, "invalid bracket: {m}"),
            Error::InsufficientData(m) => write!(f, "insufficient data: {m}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
