//! Library side of the `agp` command: sweep configuration and execution,
//! circuit export and the oracle cross-check suite.

pub mod args;
pub mod config;
pub mod export;
pub mod sweep;
pub mod verify;

use std::fmt;

/// Bad command-line input; the binary exits with status 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub(crate) fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}
