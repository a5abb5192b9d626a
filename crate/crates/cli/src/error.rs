use thiserror::Error;

/// Failures grouped by exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Solver(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Solver(_) => 3,
        }
    }

    pub(crate) fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        CliError::Data(format!("{}: {err}", path.display()))
    }
}

impl From<ranksvm_core::Error> for CliError {
    fn from(err: ranksvm_core::Error) -> Self {
        use ranksvm_core::Error as E;
        match err {
            E::InvalidArgument(_) => CliError::Usage(err.to_string()),
            E::SolverFailure { .. } => CliError::Solver(err.to_string()),
            E::DimensionMismatch { .. } | E::DegenerateDataset(_) | E::Parse { .. } => {
                CliError::Data(err.to_string())
            }
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
