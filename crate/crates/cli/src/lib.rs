//! Verification suites, reporting and field export on top of `gqweyl_core`.
//!
//! This is the only layer that touches the filesystem.

pub mod checks;
pub mod config;
pub mod element;
pub mod field;
pub mod report;
pub mod suites;

pub use checks::{registry, run_suites, CheckDef, CheckResult, Ctx};
pub use config::{Suite, SuiteConfig};
pub use report::Report;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] gqweyl_core::GqError),
}

impl HarnessError {
    /// Process exit status: every harness error is a usage or config error.
    pub fn exit_code(&self) -> i32 {
        2
    }

    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        HarnessError::Io { path: path.display().to_string(), source }
    }
}
