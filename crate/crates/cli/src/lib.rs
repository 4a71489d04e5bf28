//! Command-line front end: argument and config-file handling, seeded
//! parameter sampling, command execution and report serialization.

pub mod commands;
pub mod config;
pub mod report;
pub mod sample;

pub use commands::{run, CliError};
pub use config::{Cli, Command, Emit, RunConfig};
pub use report::Record;
pub use sample::sample_spec;
