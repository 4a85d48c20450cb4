//! Error type shared across the library.

use std::fmt;

/// Errors produced by construction, parsing and numeric evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A distribution parameter violates its constraint.
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    /// An argument is outside the operation's domain.
    Domain(String),
    /// The operation was called with inconsistent inputs (length mismatch,
    /// horizon over the dense-storage cap, ...).
    Usage(String),
    /// A numeric routine did not reach the requested accuracy.
    Numeric {
        what: &'static str,
        achieved: f64,
        requested: f64,
    },
    /// A distribution spec string could not be parsed.
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter {
                name,
                value,
                reason,
            } => write!(f, "invalid parameter {name}={value}: {reason}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Usage(msg) => write!(f, "usage error: {msg}"),
            Error::Numeric {
                what,
                achieved,
                requested,
            } => write!(
                f,
                "{what} did not converge: achieved error estimate {achieved:e}, requested {requested:e}"
            ),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
