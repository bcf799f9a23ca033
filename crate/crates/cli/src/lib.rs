//! Command-line front end for the `su11_core` checks.
//!
//! [`parse_args`] turns arguments into a validated [`RunConfig`]; [`run`]
//! executes it and returns the rendered report with the exit status.

pub mod config;
pub mod run;

pub use config::{parse_args, CliError, Command, FidelityChoice, Format, RepSelector, RunConfig};
pub use run::{execute, render, run, Document, Outcome};
