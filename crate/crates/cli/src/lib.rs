//! Batch front end: load a problem file, run one of the pipelines and
//! render the outcome as a JSON report.

pub mod bundle;
pub mod report;
pub mod run;

pub use bundle::{Algebra, Bundle, Witness};
pub use report::{Report, Status};
pub use run::{execute, Command, RunOptions};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("unresolved name: {0}")]
    UnresolvedName(String),
    #[error("invalid problem: {0}")]
    Validation(String),
    #[error("missing argument --{0}")]
    MissingArgument(&'static str),
    #[error(transparent)]
    Core(#[from] csa_core::Error),
}
