use std::fmt;

use qfuzzy::expr::ExprError;
use qfuzzy::Error;

/// A failure together with the process exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    /// Malformed or out-of-range input (exit 2).
    Validation(String),
    /// The register cap would be exceeded (exit 3).
    Cap(String),
    /// Parse or evaluation failure in the expression (exit 4).
    Expression(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Cap(_) => 3,
            CliError::Expression(_) => 4,
        }
    }

    pub fn validation(msg: impl fmt::Display) -> Self {
        CliError::Validation(msg.to_string())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Cap(m) | CliError::Expression(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } => CliError::Cap(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<ExprError> for CliError {
    fn from(e: ExprError) -> Self {
        match e {
            ExprError::Core(inner @ Error::CapExceeded { .. }) => CliError::Cap(inner.to_string()),
            ExprError::Binding { .. } => CliError::Validation(e.to_string()),
            other => CliError::Expression(other.to_string()),
        }
    }
}
