//! Experiment runner for sphlab: configuration, CSV reports, the four
//! experiment subcommands and the acceptance suite.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod accept;
pub mod config;
pub mod experiments;
pub mod report;

pub use accept::{run_accept, AcceptOptions, Outcome, Selector};
pub use config::{Command, ConfigError, ExperimentConfig};
pub use report::Report;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] sphlab_core::Error),
    #[error(transparent)]
    Report(#[from] report::ReportError),
    #[error("{0}")]
    Runtime(String),
}

impl Error {
    /// Process exit code: 2 for configuration problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::Core(sphlab_core::Error::UnknownProfile(_)) => 2,
            _ => 1,
        }
    }
}
