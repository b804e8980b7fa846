//! Script language, example catalog and report rendering for the `citor` tool.

pub mod catalog;
pub mod dsl;
pub mod report;
pub mod run;
pub mod session;

pub use catalog::{run_example_typed, ExampleOutcome, CATALOG};
pub use dsl::{parse_session, ParseError};
pub use report::{emit_report, Document, Format};
pub use run::{document_status, run_session, Options};
pub use session::{FieldChoice, Session};

use citor_core::algebra::{Rational, F32003};
use citor_core::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 3 for resource guardrails, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Guardrail(_) | Error::OracleTooLarge(_) | Error::InsufficientWindow(_)) => 3,
            _ => 2,
        }
    }
}

/// Run a catalog example over the requested field.
pub fn run_example(id: &str, field: FieldChoice) -> Result<ExampleOutcome, CliError> {
    match field {
        FieldChoice::F32003 => run_example_typed::<F32003>(id),
        FieldChoice::Rational => run_example_typed::<Rational>(id),
    }
}
