//! Command-line companion of `casimir-core`: JSON run configurations,
//! tabulated materials, concurrent sweeps, CSV/JSON output and the acceptance
//! check suites.

pub mod checks;
pub mod config;
pub mod error;
pub mod exec;
pub mod materials;
pub mod output;
pub mod run;

pub use error::{CliError, CliResult};
