//! File formats and the command-line front end for `mpcore`.

pub mod cli;
pub mod error;
pub mod format;
pub mod instances;
pub mod report;

pub use error::CliError;
