//! Command-line front end for `optproof`: instance generation, law suites
//! and the `optproof` subcommands.

pub mod commands;
pub mod generator;
pub mod suites;

pub use commands::{run, CliError, BUDGET_ENV};
pub use generator::InstanceGenerator;
pub use suites::{run_law_suite, LawSuiteReport, Suite};
