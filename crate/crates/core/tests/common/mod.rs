#![allow(dead_code)]

use cepdist_core::lti::{Signal, ZeroPoleGain};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::FftPlanner;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn white(n: usize, seed: u64) -> Signal {
    let mut r = rng(seed);
    Signal::from_samples((0..n).map(|_| r.sample(StandardNormal)).collect()).unwrap()
}

/// `count` roots inside the unit circle with magnitudes in `[lo, hi]`,
/// real or in conjugate pairs, at least `gap` apart.
pub fn roots_inside(
    r: &mut ChaCha8Rng,
    count: usize,
    lo: f64,
    hi: f64,
    gap: f64,
) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::with_capacity(count);
    while out.len() < count {
        let m = r.random_range(lo..hi);
        let cand = if out.len() + 2 <= count && r.random_bool(0.5) {
            let z = Complex64::from_polar(m, r.random_range(0.2..2.9));
            vec![z, z.conj()]
        } else {
            vec![Complex64::new(if r.random_bool(0.5) { m } else { -m }, 0.0)]
        };
        if cand
            .iter()
            .all(|c| out.iter().all(|o| (c - o).norm() >= gap))
        {
            out.extend(cand);
        }
    }
    out
}

pub fn invert(roots: &[Complex64]) -> Vec<Complex64> {
    roots
        .iter()
        .map(|r| Complex64::new(1.0, 0.0) / r.conj())
        .collect()
}

/// `H(e^{iω})` straight from the factored form.
pub fn response(poles: &[Complex64], zeros: &[Complex64], gain: f64, w: f64) -> Complex64 {
    let zi = Complex64::from_polar(1.0, -w);
    let num: Complex64 = zeros
        .iter()
        .map(|z| Complex64::new(1.0, 0.0) - z * zi)
        .product();
    let den: Complex64 = poles
        .iter()
        .map(|p| Complex64::new(1.0, 0.0) - p * zi)
        .product();
    num / den * gain
}

/// Power cepstrum `c(0..=order)` as the inverse DFT of `log|H|²` on an
/// `l`-point grid.
pub fn numeric_power_cepstrum(h: impl Fn(f64) -> Complex64, l: usize, order: usize) -> Vec<f64> {
    let mut buf: Vec<rustfft::num_complex::Complex64> = (0..l)
        .map(|m| {
            let w = 2.0 * std::f64::consts::PI * m as f64 / l as f64;
            rustfft::num_complex::Complex64::new(h(w).norm_sqr().ln(), 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_inverse(l).process(&mut buf);
    buf.iter()
        .take(order + 1)
        .map(|c| c.re / l as f64)
        .collect()
}

pub fn zpk_cepstrum_oracle(z: &ZeroPoleGain, l: usize, order: usize) -> Vec<f64> {
    let poles: Vec<_> = z.poles().collect();
    let zeros: Vec<_> = z.zeros().collect();
    numeric_power_cepstrum(|w| response(&poles, &zeros, z.gain(), w), l, order)
}

/// `Σ_{k≥1} k·c(k)²`.
pub fn weighted(c: &[f64]) -> f64 {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, v)| k as f64 * v * v)
        .sum()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
