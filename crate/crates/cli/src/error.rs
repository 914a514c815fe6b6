//! One error type for every command, bucketed by exit code.
//!
//! * 2: the invocation itself is wrong (flags, config file, bad values);
//! * 3: an input file is malformed (CSV shape, labels, unparsable cells);
//! * 4: inputs are well formed but the requested work cannot proceed
//!   (missing caches, class too small to balance, locked output dir);
//! * 5: a bug on our side (violated internal invariant).

use std::fmt;
use std::io;
use std::path::Path;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Data(String),
    Precondition(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_) => 3,
            CliError::Precondition(_) => 4,
            CliError::Internal(_) => 5,
        }
    }

    pub fn config(msg: impl Into<String>) -> CliError {
        CliError::Config(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> CliError {
        CliError::Data(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> CliError {
        CliError::Precondition(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> CliError {
        CliError::Internal(msg.into())
    }

    /// Wraps a filesystem failure on an output path. Broken output
    /// directories are an environment problem, not bad input data.
    pub fn write_io(path: &Path, err: io::Error) -> CliError {
        CliError::Precondition(format!("cannot write {}: {err}", path.display()))
    }

    pub fn read_io(path: &Path, err: io::Error) -> CliError {
        CliError::Precondition(format!("cannot read {}: {err}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (label, msg) = match self {
            CliError::Config(m) => ("config error", m),
            CliError::Data(m) => ("data error", m),
            CliError::Precondition(m) => ("precondition failed", m),
            CliError::Internal(m) => ("internal error", m),
        };
        write!(f, "{label}: {msg}")
    }
}

impl std::error::Error for CliError {}
