//! Configured, seeded, parallel experiments and their output files.

pub mod config;
pub mod output;
pub mod runner;
pub mod seed;

pub use config::{ConfigEntries, ConfigError, Endpoint, ExperimentConfig, RegretMode};
pub use output::{format_g, write_all};
pub use runner::{run_experiment, run_on_network, run_task, ExperimentError, ExperimentResult, RunError, TaskSpec};
pub use seed::seed_schedule;
