//! Front end for `snbound`: problem files in, reports out.

pub mod commands;
pub mod error;
pub mod input;
pub mod model;
pub mod report;

pub use commands::{run, Command, Options};
pub use error::CliError;
pub use input::ProblemFile;
pub use model::Problem;
pub use report::Report;

/// Parses and resolves a problem file.
pub fn load(text: &str) -> Result<Problem, CliError> {
    Problem::from_file(ProblemFile::parse(text)?)
}
