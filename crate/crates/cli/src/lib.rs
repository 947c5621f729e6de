//! Library side of the `lkdv` command: configuration parsing and the
//! `classify`, `solve` and `compare` commands.

pub mod commands;
pub mod config;

pub use commands::{CommandOutput, ExitStatus};
pub use config::RunConfig;
