//! Command-line front end: file formats and subcommands.

pub mod cli;
pub mod formats;

pub use cli::{run, run_with};
