//! Front end for `crbspec-core`: JSON run configuration, CSV formats,
//! parallel Monte Carlo drivers and the subcommands of the `crbspec` binary.

pub mod commands;
pub mod config;
pub mod csvio;
mod error;
pub mod mc;

pub use error::CliError;
