//! Process-level error classification. Usage errors (bad flags, bad
//! config values, invalid plans) exit with code 1; runtime errors
//! (unreadable files, calibration failures, solver errors) exit with 2.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }

    /// Marks a core error as a usage problem: parameter validation that
    /// failed before any data was processed.
    pub fn usage_from(err: mpctv_core::Error) -> Self {
        CliError::Usage(err.to_string())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Runtime(msg) => write!(f, "error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<mpctv_core::Error> for CliError {
    fn from(err: mpctv_core::Error) -> Self {
        CliError::Runtime(err.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Runtime(err.to_string())
    }
}
