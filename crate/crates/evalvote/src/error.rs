use crate::dataio::DataError;

/// Process exit codes.
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Core(#[from] evalvote_core::Error),
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Usage(message.into())
    }

    /// 2 for usage and parameter problems, 3 for bad input data, 4 for numeric failures.
    pub fn exit_code(&self) -> i32 {
        use evalvote_core::Error as E;
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
            CliError::Core(E::Matrix { .. } | E::Fit(_)) => EXIT_NUMERIC,
            CliError::Core(_) => EXIT_USAGE,
        }
    }
}
