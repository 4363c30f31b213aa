//! Batch front-end for the memory-kernel dynamics library: scenario config
//! parsing and execution. The `rwadyn` binary is a thin wrapper over
//! [`config::parse_config`], [`config::figure1_preset`], and
//! [`run::run_scenario`].

pub mod config;
pub mod run;

pub use config::{figure1_preset, parse_config, ConfigError, Model, ScenarioConfig};
pub use run::{run_scenario, RunError, RunSummary};
