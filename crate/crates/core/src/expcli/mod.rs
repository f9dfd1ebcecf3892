//! Experiment driver behind the `covert-relay` binary: scenario files,
//! sweeps, CSV tables and plot scripts.

pub mod cli;
pub mod plot;
pub mod runner;
pub mod scenario_file;
pub mod table;

pub use runner::{average_over_source_channel, run_scenario, CliError, RunOptions, RunOutput};
pub use scenario_file::ScenarioFile;
