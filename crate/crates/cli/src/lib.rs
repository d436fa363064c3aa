//! Command-line front end for constrained bandit experiments.
//!
//! Subcommands: `run` (Monte Carlo sweep to CSV/JSON), `analyze` (gaps,
//! hardness and lower-bound rates of an instance) and `presets`.

pub mod commands;
pub mod config;
pub mod output;
pub mod presets;
pub mod report;

pub use config::{load_config, ConfigError, ExperimentConfig, Overrides};
