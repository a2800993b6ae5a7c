//! File formats, run parallelism and the `gdrq` command line on top of
//! `gdrq-core`.

pub mod cli;
pub mod config;
pub mod data;
pub mod error;
pub mod output;
pub mod parallel;
pub mod selftest;

pub use error::CliError;
