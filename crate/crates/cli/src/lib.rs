//! Command-line front end for the CV-QKD simulator: experiment configs,
//! single sessions, parameter sweeps and the formula self-check.
//!
//! The binary in `main.rs` is a thin wrapper; everything testable lives here.

pub mod config;
pub mod error;
pub mod record;
pub mod run;
pub mod validate;

pub use config::{emit_config, parse_config, ExperimentConfig, SourceSpec, SweepParameter, SweepSpec};
pub use error::{CliError, ConfigError};
pub use record::ResultRecord;
