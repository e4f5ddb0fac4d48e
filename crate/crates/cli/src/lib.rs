//! Batch front end: configuration, parameter scans and table output.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use commands::{run, Command};
pub use config::Config;
pub use error::{CliError, Result};
pub use output::{render, Cell, Format, Provenance, Table};
