//! Config-driven orchestration behind the `uavbs` command line.

pub mod config;
pub mod output;
pub mod runner;

pub use config::{parse_config, ConfigError, RunConfig, SweepSpec, SweepVariable};
