use std::fmt;
use std::process::ExitCode;

/// A failure together with the exit status it maps to.
#[derive(Debug)]
pub enum CliError {
    /// A check ran and did not hold (exit 1).
    Assertion(String),
    /// Unreadable or malformed input (exit 2).
    Input(String),
    /// Well-formed input that violates a mathematical contract (exit 3).
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Assertion(_) => 1,
            CliError::Input(_) => 2,
            CliError::Validation(_) => 3,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Assertion(m) | CliError::Input(m) | CliError::Validation(m) => f.write_str(m),
        }
    }
}

impl From<twistor_core::Error> for CliError {
    fn from(e: twistor_core::Error) -> Self {
        match e {
            twistor_core::Error::Unknown { .. } => CliError::Input(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
