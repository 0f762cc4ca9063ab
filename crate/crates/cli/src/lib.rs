//! Command-line front end for shuffle-model blanket accounting: run
//! configuration, subcommands, rendering, and the self-check suite.

pub mod check;
pub mod commands;
pub mod config;
pub mod error;
pub mod table;

pub use error::{CliError, CliResult};
