use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_HERALD_FAILED: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or invalid configuration, including bad flag values.
    #[error("{0}")]
    Config(String),
    #[error("herald failed: {0}")]
    HeraldFailed(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] ecp_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::HeraldFailed(_) | CliError::Core(ecp_core::Error::HeraldFailed) => {
                EXIT_HERALD_FAILED
            }
            CliError::Io(_) => EXIT_IO,
            CliError::Core(_) => EXIT_CONFIG,
        }
    }
}
