//! Command-line front end for `qcbound`: case configs, bound evaluation,
//! FEM verification and deterministic reports.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod report;

pub use cli::{run, Cli, Response};
pub use commands::{bounds, verify, Outcome, RunOptions};
pub use config::{BoundName, CaseConfig, Format};
pub use error::{CliError, CliResult};
pub use report::VerificationReport;
