//! Command-line front end: point generation, generator checks, integration
//! reports, scene rendering and throughput comparison.

pub mod bench;
pub mod commands;
pub mod render;
pub mod scene;

use std::io;
use std::process::ExitCode;

pub use commands::{run, Cli};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(#[from] lowdisc::Error),

    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },

    /// A check ran and found a violation.
    #[error("{0}")]
    Quality(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Quality(_) => ExitCode::from(1),
            _ => ExitCode::from(2),
        }
    }

    pub(crate) fn io(path: &str, source: io::Error) -> Self {
        CliError::Io {
            path: path.to_string(),
            source,
        }
    }
}
