//! Command implementations behind the `alphagan` binary.
//!
//! Each `cmd_*` function does the work of one subcommand and writes its
//! CSV or JSON output; `main.rs` only parses arguments and maps errors to
//! exit codes.

pub mod alphas;
pub mod checks;
pub mod config;
pub mod convergence;
pub mod error;
pub mod output;
pub mod sweep;
pub mod train;

pub use error::{CliError, CliResult};
