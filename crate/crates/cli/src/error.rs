use cepdist_core::Error as CoreError;

/// Failure classes with their process exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad arguments, configuration or input files. Exit code 2.
    #[error("{0}")]
    Validation(String),
    /// A numerical check or computation failed. Exit code 3.
    #[error("{0}")]
    Tolerance(String),
    /// The phase-type gate refused the request. Exit code 4.
    #[error("{0}")]
    PhaseGate(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Io { .. } => 2,
            CliError::Tolerance(_) => 3,
            CliError::PhaseGate(_) => 4,
        }
    }

    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }

    /// Wraps a core error, prefixing `context`.
    pub fn core(context: &str, e: CoreError) -> Self {
        let msg = format!("{context}: {e}");
        match e {
            CoreError::MixedPhaseUnsupported
            | CoreError::NotMinimumPhaseStable
            | CoreError::WrongPhaseType { .. } => CliError::PhaseGate(msg),
            CoreError::LogOfNonpositive { .. }
            | CoreError::DegenerateInputSpectrum { .. }
            | CoreError::SpectralNull { .. }
            | CoreError::RankDeficient { .. }
            | CoreError::ZeroNorm
            | CoreError::NotConverged { .. } => CliError::Tolerance(msg),
            _ => CliError::Validation(msg),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
