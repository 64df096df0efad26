//! Batch front end: parse a job, run it through the `apfact` pipeline and
//! render the report as JSON, text or CSV.

pub mod emit;
pub mod job;
pub mod report;
pub mod suite;

use thiserror::Error;

pub use emit::emit_report;
pub use job::{parse_input, read_input, Command, JobOptions, JobSpec, OutputFormat, Overrides};
pub use report::{run, Outcome, Report};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column} (field `{field}`): {message}")]
    Parse { line: usize, column: usize, field: String, message: String },
    #[error("invalid job: {0}")]
    Validation(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{stage} failed: {message}")]
    Module { stage: &'static str, message: String },
}
