//! Error type shared by every module.

use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed text input (game files, vectors, formulas).
    Parse(String),
    /// Structurally invalid input, such as a partial transition function or
    /// a reference to an unknown state.
    Invalid(String),
    /// A configurable enumeration or size cap was exceeded. The computation
    /// was abandoned rather than answered approximately.
    Budget(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse(m) => write!(f, "parse error: {m}"),
            Error::Invalid(m) => write!(f, "invalid input: {m}"),
            Error::Budget(m) => write!(f, "resource budget exceeded: {m}"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}

pub(crate) fn budget<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Budget(msg.into()))
}
