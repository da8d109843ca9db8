//! Seeded test signals and random systems.

use cepdist_core::lti::{Signal, ZeroPoleGain};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Unit-variance Gaussian white noise.
pub fn white_noise(len: usize, seed: u64) -> Signal {
    let mut r = rng(seed);
    Signal::from_samples((0..len).map(|_| r.sample(StandardNormal)).collect())
        .expect("nonempty finite noise")
}

/// Up to `max_roots` roots per side, real or in conjugate pairs, with
/// magnitudes in `[0.1, max_radius]`.
pub fn random_roots<R: Rng>(rng: &mut R, max_roots: usize, max_radius: f64) -> Vec<Complex64> {
    let count = rng.random_range(0..=max_roots);
    let mut roots = Vec::with_capacity(count);
    while roots.len() < count {
        let r = rng.random_range(0.1..max_radius);
        if roots.len() + 2 <= count && rng.random_bool(0.5) {
            let z = Complex64::from_polar(r, rng.random_range(0.1..3.0));
            roots.push(z);
            roots.push(z.conj());
        } else {
            roots.push(Complex64::new(
                if rng.random_bool(0.5) { r } else { -r },
                0.0,
            ));
        }
    }
    roots
}

/// A random stable minimum-phase system with at least one root.
pub fn random_min_phase<R: Rng>(rng: &mut R, max_roots: usize) -> ZeroPoleGain {
    loop {
        let poles = random_roots(rng, max_roots, 0.9);
        let zeros = random_roots(rng, max_roots, 0.9);
        if poles.is_empty() && zeros.is_empty() {
            continue;
        }
        let gain = rng.random_range(0.5..2.0);
        if let Ok(z) = ZeroPoleGain::new(&poles, &zeros, gain) {
            return z;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cepdist_core::lti::RootPattern;

    #[test]
    fn noise_is_reproducible() {
        assert_eq!(white_noise(64, 3), white_noise(64, 3));
        assert_ne!(white_noise(64, 3), white_noise(64, 4));
    }

    #[test]
    fn random_systems_are_minimum_phase() {
        let mut r = rng(0);
        for _ in 0..50 {
            let z = random_min_phase(&mut r, 4);
            assert_eq!(z.pattern(), RootPattern::MinimumPhaseStable);
            assert!(z.folded_radius() < 0.9);
        }
    }
}
