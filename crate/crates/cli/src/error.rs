use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration at `{path}`: {reason}")]
    Config { path: String, reason: String },
    #[error(transparent)]
    Core(#[from] dtc_probe::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("could not serialize output: {0}")]
    Serialize(String),
}

pub mod exit {
    pub const OK: i32 = 0;
    pub const CONFIG: i32 = 2;
    pub const NUMERICAL: i32 = 3;
    pub const BRACKETING: i32 = 4;
    pub const IO: i32 = 5;
    pub const DOMAIN: i32 = 6;
}

impl CliError {
    pub fn config(path: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::Config {
            path: path.into(),
            reason: reason.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Rewrites a core configuration error so its field carries `prefix`.
    pub fn within(self, prefix: &str) -> Self {
        match self {
            CliError::Core(dtc_probe::Error::Config { field, reason }) => CliError::Config {
                path: format!("{prefix}.{field}"),
                reason,
            },
            other => other,
        }
    }

    pub fn exit_code(&self) -> i32 {
        use dtc_probe::Error as E;
        match self {
            CliError::Config { .. } | CliError::Core(E::Config { .. }) => exit::CONFIG,
            CliError::Core(E::NumericalIntegrity(_) | E::DimensionMismatch { .. }) => exit::NUMERICAL,
            CliError::Core(E::ThresholdNotBracketed(_)) => exit::BRACKETING,
            CliError::Core(E::Domain(_)) => exit::DOMAIN,
            CliError::Io { .. } | CliError::Serialize(_) => exit::IO,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
