//! CLI failures and their exit codes.

use gyrospin_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read configuration: {0}")]
    Missing(String),
    #[error("malformed configuration: {0}")]
    Malformed(String),
    #[error("unknown configuration key: {0}")]
    UnknownKey(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("regime violation: {0}")]
    Regime(String),
    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    pub fn range(name: &str, reason: impl std::fmt::Display) -> Self {
        CliError::OutOfRange(format!("{name}: {reason}"))
    }

    pub(crate) fn from_json(e: serde_json::Error) -> Self {
        let msg = e.to_string();
        if msg.starts_with("unknown field") || msg.starts_with("unknown variant") {
            CliError::UnknownKey(msg)
        } else if e.is_data() && !msg.starts_with("missing field") {
            CliError::OutOfRange(msg)
        } else {
            CliError::Malformed(msg)
        }
    }

    /// Process exit code.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::OutOfRange(_) => 2,
            CliError::Numeric(_) | CliError::Output(_) => 3,
            CliError::Regime(_) => 4,
            CliError::Missing(_) => 5,
            CliError::Malformed(_) => 6,
            CliError::UnknownKey(_) => 7,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidParameter { .. }
            | CoreError::InvalidBasis(_)
            | CoreError::UnsupportedShape(_)
            | CoreError::Undefined { .. }
            | CoreError::OutOfRange { .. } => CliError::OutOfRange(e.to_string()),
            CoreError::RegimeViolation(_) => CliError::Regime(e.to_string()),
            CoreError::DimensionMismatch { .. }
            | CoreError::NotHermitian { .. }
            | CoreError::TruncationLoss { .. }
            | CoreError::Numerical(_) => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}
