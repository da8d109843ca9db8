//! Phase-type test on complex cepstra.
//!
//! A stable minimum-phase system has a causal complex cepstrum, an unstable
//! maximum-phase one an anticausal cepstrum; anything else has energy on
//! both sides. Because the coefficients carry a `1/k` factor, looking at
//! the first `K_test` on each side is enough.

use crate::error::{Error, Result};
use crate::fft::next_pow2;
use crate::lti::Signal;
use crate::spectral::{transfer_complex_cepstrum_from_io, CepstrumKind, CepstrumSequence};

pub const DEFAULT_K_TEST: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseKind {
    MinimumPhaseStable,
    MaximumPhaseUnstable,
    Mixed,
    /// Both sides vanish: a pure gain, or a system the test cannot resolve.
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseVerdict {
    pub kind: PhaseKind,
    /// `Σ_{k=1}^{K_test} ĉ(k)²`.
    pub positive_energy: f64,
    /// `Σ_{k=1}^{K_test} ĉ(-k)²`.
    pub negative_energy: f64,
    /// Relative threshold a side's energy is compared against.
    pub tolerance: f64,
}

/// A side counts as zero when its energy is at most
/// `tolerance · (positive + negative + epsilon)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifierConfig {
    pub k_test: usize,
    pub tolerance: f64,
    pub epsilon: f64,
}

impl ClassifierConfig {
    /// Thresholds for cepstra computed exactly from a model.
    pub const MODEL: Self = Self {
        k_test: DEFAULT_K_TEST,
        tolerance: 1e-3,
        epsilon: 1e-12,
    };

    /// Thresholds for cepstra estimated from finite data.
    pub const ESTIMATED: Self = Self {
        k_test: DEFAULT_K_TEST,
        tolerance: 5e-2,
        epsilon: 1e-8,
    };
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self::MODEL
    }
}

/// Classifies a complex cepstrum by the energy on each side of `k = 0`.
pub fn classify(c: &CepstrumSequence, config: &ClassifierConfig) -> Result<PhaseVerdict> {
    if c.kind() != CepstrumKind::Complex {
        return Err(Error::KindMismatch);
    }
    if config.k_test == 0 || config.k_test > c.order() {
        return Err(Error::InvalidArgument("K_test must lie in 1..=K"));
    }
    if !(config.tolerance > 0.0 && config.epsilon > 0.0) {
        return Err(Error::InvalidArgument(
            "classifier tolerances must be positive",
        ));
    }
    let energy = |side: &[f64]| side[..config.k_test].iter().map(|v| v * v).sum::<f64>();
    let positive_energy = energy(c.positive());
    let negative_energy = energy(c.negative());
    let limit = config.tolerance * (positive_energy + negative_energy + config.epsilon);
    let kind = match (positive_energy <= limit, negative_energy <= limit) {
        (true, true) => PhaseKind::Indeterminate,
        (false, true) => PhaseKind::MinimumPhaseStable,
        (true, false) => PhaseKind::MaximumPhaseUnstable,
        (false, false) => PhaseKind::Mixed,
    };
    Ok(PhaseVerdict {
        kind,
        positive_energy,
        negative_energy,
        tolerance: config.tolerance,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IoClassifierConfig {
    /// FFT length; defaults to `2·next_pow2(N)`.
    pub fft_length: Option<usize>,
    pub classifier: ClassifierConfig,
}

impl Default for IoClassifierConfig {
    fn default() -> Self {
        Self {
            fft_length: None,
            classifier: ClassifierConfig::ESTIMATED,
        }
    }
}

/// Classifies the system between `u` and `y` from `ĉ_y - ĉ_u`.
pub fn classify_from_io(
    input: &Signal,
    output: &Signal,
    config: &IoClassifierConfig,
) -> Result<PhaseVerdict> {
    let l = config.fft_length.unwrap_or(2 * next_pow2(input.len()));
    let c = transfer_complex_cepstrum_from_io(input, output, l, config.classifier.k_test)?;
    classify(&c, &config.classifier)
}
