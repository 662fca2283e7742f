//! Configuration, output and subcommands of the `lz-sim` binary.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use config::{parse_config, ScenarioConfig};
pub use error::CliError;
