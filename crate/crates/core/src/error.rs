use num_complex::Complex64;

/// Errors produced by the analysis routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("signal lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("signal is empty")]
    EmptySignal,
    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    #[error("feedthrough D is (numerically) zero; system is not invertible")]
    NotInvertible,
    #[error("root {re}{im:+}i lies on the unit circle")]
    UnitCircleRoot { re: f64, im: f64 },
    #[error("root {re}{im:+}i is repeated")]
    NonSimpleRoot { re: f64, im: f64 },
    #[error("complex root {re}{im:+}i has no conjugate partner")]
    MissingConjugate { re: f64, im: f64 },
    #[error("spectrum bin {bin} is not strictly positive")]
    LogOfNonpositive { bin: usize },
    #[error("input spectrum is degenerate at bin {bin}")]
    DegenerateInputSpectrum { bin: usize },
    #[error("spectral null at bin {bin}")]
    SpectralNull { bin: usize },
    #[error("cepstrum kind mismatch")]
    KindMismatch,
    #[error("system is not minimum-phase and stable")]
    NotMinimumPhaseStable,
    #[error("expected {expected} content only")]
    WrongPhaseType { expected: &'static str },
    #[error("mixed-phase systems have no subspace-angle interpretation")]
    MixedPhaseUnsupported,
    #[error("matrix is rank deficient (relative singular value {ratio:e})")]
    RankDeficient { ratio: f64 },
    #[error("insufficient data: need {needed} samples, have {available}")]
    InsufficientData { needed: usize, available: usize },
    #[error("signal has zero norm")]
    ZeroNorm,
    #[error("truncation not converged: change {gap:e} between j and 2j")]
    NotConverged { gap: f64 },
}

impl Error {
    pub(crate) fn unit_circle(root: Complex64) -> Self {
        Error::UnitCircleRoot {
            re: root.re,
            im: root.im,
        }
    }

    pub(crate) fn non_simple(root: Complex64) -> Self {
        Error::NonSimpleRoot {
            re: root.re,
            im: root.im,
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
