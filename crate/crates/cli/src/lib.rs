//! File formats, bundled scenarios and the command-line driver for
//! `scalsup-core`.

pub mod cli;
pub mod dot;
pub mod error;
pub mod format;
pub mod random;
pub mod scenario;

pub use error::CliError;
pub use scenario::{load_scenario, parse_scenario, resolve_scenario, Overrides, Scenario};
