//! Experiment harness: configuration, replicated runs, sweeps and the
//! command-line front end.

pub mod cli;
mod config;
mod experiment;
mod sweep;

use std::path::{Path, PathBuf};

pub use config::{
    default_output_dir, parse_policy_list, EnvSource, ExperimentConfig, PolicyKind, PolicySpec, DEFAULT_POLICIES,
    OUTPUT_DIR_VAR,
};
pub use experiment::{
    load_environment, run_experiment, simulate_experiment, EnvironmentInfo, PolicySummary, Quantiles,
    ReplicationResult, RunSummary, SUMMARY_SCHEMA,
};
pub use sweep::{point_config, sweep, SweepAxis, SweepRow, SweepTable};

/// Harness failures, grouped by the exit code the CLI reports.
#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("simulation error: {0}")]
    Library(#[from] crate::error::Error),
}

impl HarnessError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// Process exit code for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 3,
            Self::Io { .. } => 4,
            Self::Library(e) => match e {
                crate::error::Error::Contract(_) | crate::error::Error::Dimension(_) => 5,
                // bad parameters and unreadable environment files are configuration problems
                _ => 3,
            },
        }
    }
}
