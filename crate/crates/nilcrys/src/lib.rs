//! File formats, reports and the command-line front end for `nilcrys-core`.

pub mod algebra_file;
pub mod certificate;
pub mod commands;
pub mod error;
pub mod numbers;

pub use error::{CliError, CliResult};
