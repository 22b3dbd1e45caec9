use std::io;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Unphysical(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("io error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    /// 0 success, 1 io, 2 config, 3 unphysical operating point, 4 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Unphysical(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

impl From<ponderomotive_core::Error> for CliError {
    fn from(e: ponderomotive_core::Error) -> Self {
        use ponderomotive_core::Error as E;
        match e {
            E::Domain(_) | E::Precondition(_) => CliError::Config(e.to_string()),
            E::Unphysical { .. } => CliError::Unphysical(e.to_string()),
            E::Singular { .. } => CliError::Numerical(e.to_string()),
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
