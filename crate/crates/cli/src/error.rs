use std::path::PathBuf;

use coupled_tls::PhysicsError;
use thiserror::Error;

/// A scenario field that failed validation, with its dotted path.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{path}: {message}")]
pub struct ValidationError {
    pub path: String,
    pub message: String,
}

impl ValidationError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid scenario: {0}")]
    Validation(#[from] ValidationError),

    #[error("invalid arguments: {0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("at {point}: {source}")]
    Physics {
        point: String,
        #[source]
        source: PhysicsError,
    },

    #[error("verification suite `{suite}` failed: {failed} check(s)")]
    Verify { suite: String, failed: usize },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) | CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::Physics { .. } => 2,
            CliError::Verify { .. } => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::from(ValidationError::new("sweep.points", "too few")).exit_code(), 1);
        assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
        assert_eq!(CliError::io("f", std::io::ErrorKind::NotFound.into()).exit_code(), 1);
        let physics = CliError::Physics {
            point: "theta = 1".into(),
            source: PhysicsError::DarkSector,
        };
        assert_eq!(physics.exit_code(), 2);
        assert!(physics.to_string().contains("theta = 1"));
        let verify = CliError::Verify {
            suite: "oracles".into(),
            failed: 2,
        };
        assert_eq!(verify.exit_code(), 3);
    }
}
