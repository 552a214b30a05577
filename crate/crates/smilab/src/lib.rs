//! Command-line driver and file formats for the smoothed-inverse experiments.

pub mod cli;
pub mod config;
pub mod experiment;
pub mod parallel;
pub mod report;

pub use config::{parse_config, ConfigError, Experiment, ExperimentConfig};
pub use experiment::{run, RunError};
pub use parallel::Parallel;
pub use report::{RunReport, Verdict};
