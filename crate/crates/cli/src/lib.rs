//! Configuration, sweep execution and output files for the `pulsecorr` binary.

pub mod checks;
pub mod config;
pub mod error;
pub mod report;
pub mod sweep;

pub use error::{CliError, Result};
