use frl_core::Error as CoreError;

/// Process exit codes: 0 success, 2 parse error, 3 domain error,
/// 4 numerical failure.
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_DOMAIN: u8 = 3;
pub const EXIT_NUMERICAL: u8 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{message}")]
    Parse { message: String, position: Option<usize> },
    #[error(transparent)]
    Domain(#[from] CoreError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        CliError::Parse { message: message.into(), position: None }
    }

    pub fn parse_at(message: impl Into<String>, position: usize) -> Self {
        CliError::Parse { message: message.into(), position: Some(position) }
    }

    /// Stable machine-readable tag for the error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "parse-error",
            CliError::Domain(e) => match e {
                CoreError::InvalidArgument(_) => "invalid-argument",
                CoreError::UnsupportedDimension(_) => "unsupported-dimension",
                CoreError::NoSpanningTree => "no-spanning-tree",
                CoreError::CapacityExceeded(_) => "capacity-exceeded",
                CoreError::DivergentPeriod(_) => "divergent-period",
                CoreError::RequiresExtension { .. } => "requires-extension",
                CoreError::NumericalFailure { .. } => "numerical-failure",
                CoreError::SingularPoint { .. } => "singular-point",
            },
            CliError::Io(_) => "io-error",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse { .. } => EXIT_PARSE,
            CliError::Domain(e) => match e {
                CoreError::NumericalFailure { .. } | CoreError::SingularPoint { .. } => {
                    EXIT_NUMERICAL
                }
                _ => EXIT_DOMAIN,
            },
            CliError::Io(_) => EXIT_DOMAIN,
        }
    }
}

