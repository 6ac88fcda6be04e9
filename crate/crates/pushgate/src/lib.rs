//! Scenario files, CSV tables and the `pushgate` command line on top of
//! [`pushgate_core`].

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod table;

pub use error::CliError;
pub use pushgate_core;
