use std::path::PathBuf;

use banana::BananaError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error("{0}")]
    Usage(String),
    #[error("{what} has {got} values, at least 2 are needed")]
    Size { what: String, got: usize },
    #[error("invariant violation after {after}:\n{report}")]
    Invariant { after: String, report: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Usage(_) => 2,
            CliError::Size { .. } => 3,
            CliError::Invariant { .. } => 4,
            CliError::Io { .. } => 1,
        }
    }

    /// A failed script command; size errors keep their own exit code.
    pub fn command(path: &std::path::Path, line: usize, err: BananaError) -> CliError {
        match err {
            BananaError::Size { got, .. } => CliError::Size { what: format!("{}:{line}", path.display()), got },
            e => CliError::Parse { path: path.to_owned(), line, msg: e.to_string() },
        }
    }
}
