// SPDX-License-Identifier: Apache-2.0

//! Verification campaigns, cost benchmarks, cycle traces and RTL emission
//! on top of `nibmul-core`, shared by the `nibmul` binary and its tests.

pub mod bench;
pub mod cli;
pub mod config;
pub mod stimulus;
pub mod verify;
pub mod waves;

use std::path::PathBuf;

pub use config::{RunConfig, Stimulus};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Core(#[from] nibmul_core::Error),
}

impl HarnessError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> HarnessError {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Verification(_) => exit::VERIFICATION,
            HarnessError::Usage(_) | HarnessError::Core(_) => exit::USAGE,
            HarnessError::Io { .. } => exit::IO,
        }
    }
}

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VERIFICATION: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const IO: i32 = 3;
}

/// Writes `contents` to `path`, creating parent directories.
pub fn write_file(path: &std::path::Path, contents: &str) -> Result<(), HarnessError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| HarnessError::io(path, e))
}
