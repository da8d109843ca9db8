use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{Signal, ZeroPoleGain};
use crate::error::{Error, Result};

/// Samples in `t = 0, 0.01, …, 11`.
pub const EXAMPLE_LENGTH: usize = 1101;
pub const EXAMPLE_STEP: f64 = 0.01;
/// Matches the RMS of a unit sinusoid.
pub const EXAMPLE_NOISE_STD: f64 = core::f64::consts::FRAC_1_SQRT_2;
/// Per-sample envelope factor, `e^{-0.05 t}` at the example's step. With it
/// the signals' standard deviations come out near 0.55.
pub const DEFAULT_DAMPING: f64 = 0.9995;

const FREQUENCY: f64 = 10.0;

/// The damped sine, cosine and Gaussian-noise signals of the motivating
/// example.
#[derive(Debug, Clone, PartialEq)]
pub struct ExampleSignals {
    pub sine: Signal,
    pub cosine: Signal,
    pub noise: Signal,
}

/// Builds the three example signals, each multiplied by `damping^k`.
pub fn make_example_signals(damping: f64, seed: u64) -> Result<ExampleSignals> {
    if !(damping > 0.0 && damping <= 1.0) {
        return Err(Error::InvalidArgument("damping must lie in (0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sine = Vec::with_capacity(EXAMPLE_LENGTH);
    let mut cosine = Vec::with_capacity(EXAMPLE_LENGTH);
    let mut noise = Vec::with_capacity(EXAMPLE_LENGTH);
    for k in 0..EXAMPLE_LENGTH {
        let envelope = libm::pow(damping, k as f64);
        let (s, c) = libm::sincos(FREQUENCY * k as f64 * EXAMPLE_STEP);
        let w: f64 = StandardNormal.sample(&mut rng);
        sine.push(envelope * s);
        cosine.push(envelope * c);
        noise.push(envelope * EXAMPLE_NOISE_STD * w);
    }
    Ok(ExampleSignals {
        sine: Signal::new(sine, EXAMPLE_STEP)?,
        cosine: Signal::new(cosine, EXAMPLE_STEP)?,
        noise: Signal::new(noise, EXAMPLE_STEP)?,
    })
}

/// Zeros 0.8, 0.6, 0 and poles 0.9, 0.7, 0.4.
pub fn minimum_phase_reference() -> ZeroPoleGain {
    ZeroPoleGain::from_real(&[0.9, 0.7, 0.4], &[0.8, 0.6, 0.0], 1.0).expect("valid roots")
}

/// The root-inverted minimum-phase reference; the zero at the origin maps
/// to `1e15`.
pub fn maximum_phase_reference() -> ZeroPoleGain {
    ZeroPoleGain::from_real(
        &[1.0 / 0.9, 1.0 / 0.7, 1.0 / 0.4],
        &[1.0 / 0.8, 1.0 / 0.6, 1e15],
        1.0,
    )
    .expect("valid roots")
}

/// Zeros 1/0.8, 0.6, 0 and poles 0.9, 0.7, 1/0.4.
pub fn mixed_phase_reference() -> ZeroPoleGain {
    ZeroPoleGain::from_real(&[0.9, 0.7, 1.0 / 0.4], &[1.0 / 0.8, 0.6, 0.0], 1.0)
        .expect("valid roots")
}
