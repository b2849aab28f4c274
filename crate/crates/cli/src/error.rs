use std::path::Path;

/// Failures of a CLI run, each mapped to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Missing or inconsistent arguments.
    #[error("{0}")]
    Usage(String),
    /// Rejected by the analysis library.
    #[error(transparent)]
    Analysis(#[from] losdof::Error),
    /// Config file unreadable or malformed.
    #[error("config: {0}")]
    Config(String),
    /// Output could not be written.
    #[error("{path}: {message}")]
    Output { path: String, message: String },
    /// `verify` found failing checks.
    #[error("{0} verification check(s) failed")]
    VerifyFailed(usize),
}

impl CliError {
    /// 2 for argument problems, 3 for numerical failures.
    pub fn exit_code(&self) -> u8 {
        use losdof::Error as E;
        match self {
            Self::Usage(_) | Self::Config(_) | Self::Output { .. } => 2,
            Self::VerifyFailed(_) => 3,
            Self::Analysis(e) => match e {
                E::NonFinite(_) | E::InvalidParameter { .. } | E::NonDivisibleSpacing { .. } | E::Unreachable { .. } => 2,
                E::Indeterminate
                | E::CoincidentPoint
                | E::QuadratureFailed { .. }
                | E::CoincidentAntennas
                | E::ZeroSpectrum
                | E::ZeroBandwidth => 3,
            },
        }
    }

    pub(crate) fn output(path: Option<&Path>, e: impl std::fmt::Display) -> Self {
        Self::Output {
            path: path.map_or_else(|| "<stdout>".to_string(), |p| p.display().to_string()),
            message: e.to_string(),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
