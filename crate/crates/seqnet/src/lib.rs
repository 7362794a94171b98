//! IO, serialization, parallel drivers, and CLI plumbing for the core
//! toolkit. Everything here is a view or a transport; the algorithms and
//! their contracts live in seqnet-core.

pub mod cli;
pub mod formats;
pub mod io;
pub mod parallel;

use thiserror::Error;

/// Companion-crate error: wraps core errors and adds the file/format
/// failures that only exist at the IO boundary.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] seqnet_core::Error),
    #[error("cannot access {path}: {source}")]
    File {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Format(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// Process exit code: 1 for usage problems, 2 for data/model problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            _ => 2,
        }
    }

    pub(crate) fn file(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::File {
            path: path.display().to_string(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
