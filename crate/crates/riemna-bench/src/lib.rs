//! Library half of the benchmark harness: configuration, the run/sweep
//! drivers, and the acceptance suite shared by `cargo test` and the
//! `selftest` subcommand.

pub mod acceptance;
pub mod config;
pub mod runner;
