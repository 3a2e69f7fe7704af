use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),

    #[error(transparent)]
    Model(#[from] ubb_core::Error),

    #[error("{0}")]
    Io(String),
}

impl CliError {
    /// 2 for invalid input, 3 for an unreachable calibration target, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Model(ubb_core::Error::Infeasible(_)) => 3,
            CliError::Model(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
