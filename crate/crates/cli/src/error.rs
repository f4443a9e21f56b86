//! CLI error taxonomy mapped to process exit codes: 2 for configuration
//! problems, 3 for numerical failures, 4 for validity refusals.

use serde::Serialize;
use thiserror::Error;

use ladder_sim_core::Error as CoreError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Core(CoreError),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidScheme(_)
            | CoreError::Config(_)
            | CoreError::InvalidInput(_)
            | CoreError::MissingWaist { .. } => CliError::Config(e.to_string()),
            other => CliError::Core(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Core(core) => match core {
                CoreError::Numerical(_) => 3,
                CoreError::OutOfValidity(_)
                | CoreError::ShiftUnresolved
                | CoreError::DegenerateDynamics
                | CoreError::EliminationUndefined
                | CoreError::ZeroDetuning
                | CoreError::NoOscillation
                | CoreError::UnsupportedScheme(_) => 4,
                _ => 2,
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            2 => "config",
            3 => "numerical",
            _ => "validity",
        }
    }
}

/// Machine-readable error object for the diagnostic stream.
#[derive(Serialize)]
pub struct ErrorObject<'a> {
    pub error: ErrorBody<'a>,
}

#[derive(Serialize)]
pub struct ErrorBody<'a> {
    pub kind: &'a str,
    pub message: String,
    pub exit_code: i32,
}

impl CliError {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&ErrorObject {
            error: ErrorBody {
                kind: self.kind(),
                message: self.to_string(),
                exit_code: self.exit_code(),
            },
        })
        .unwrap_or_else(|_| format!("{{\"error\":{{\"message\":\"{self}\"}}}}"))
    }
}
