//! Crate-wide error type.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The zero polynomial has no trailing term.
    ZeroPolynomial,
    /// A determinant index set with repeated points (the determinant
    /// vanishes identically).
    DegeneratePointSet,
    /// An operation's precondition does not hold for the given input.
    Precondition(String),
    /// An exactness cross-check failed; the message carries the first
    /// offending datum. Never silently dropped.
    Consistency(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroPolynomial => write!(f, "zero polynomial has no trailing term"),
            Error::DegeneratePointSet => write!(f, "point set has repeated points"),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::Consistency(msg) => write!(f, "consistency failure: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
