//! File format, JSON reports and command dispatch for the `symplie` binary.

mod commands;
pub mod format;
pub mod report;

pub use commands::{run, EXIT_INVALID, EXIT_OK, EXIT_UNRESOLVED, EXIT_USAGE};
