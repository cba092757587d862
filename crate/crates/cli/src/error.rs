use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] qradius_core::Error),
    #[error(transparent)]
    Verify(#[from] qradius_verify::Error),
}

impl CliError {
    /// Process exit code: 3 for bad input, 4 for numerical non-convergence.
    pub fn exit_code(&self) -> u8 {
        let numerical = match self {
            CliError::Core(e) => e.is_numerical(),
            CliError::Verify(qradius_verify::Error::Core(e)) => e.is_numerical(),
            _ => false,
        };
        if numerical {
            4
        } else {
            3
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
