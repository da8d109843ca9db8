use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::{fft_real, next_pow2, prev_pow2};
use crate::lti::Signal;

/// Default Welch segment overlap.
pub const DEFAULT_OVERLAP: f64 = 0.75;
/// Upper bound on the default Welch window length.
pub const MAX_WELCH_WINDOW: usize = 1024;
/// Shorter signals fall back to the periodogram under [`Estimator::Auto`].
pub const MIN_WELCH_LENGTH: usize = 128;

/// How a [`SpectrumEstimate`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsdMethod {
    Periodogram,
    Welch,
    /// Exact `|H|²` evaluated from a model.
    Model,
}

/// Power spectrum on the grid `ω_m = 2πm/L`, `L` a power of two.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEstimate {
    values: Vec<f64>,
    method: PsdMethod,
}

impl SpectrumEstimate {
    pub fn new(values: Vec<f64>, method: PsdMethod) -> Result<Self> {
        if values.is_empty() || !values.len().is_power_of_two() {
            return Err(Error::InvalidArgument(
                "spectrum length must be a power of two",
            ));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { values, method })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn method(&self) -> PsdMethod {
        self.method
    }
}

/// Power spectrum estimator selection.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Estimator {
    /// Welch with a Hann window of `min(prev_pow2(N/8), 1024)` samples and
    /// 75% overlap; signals shorter than 128 samples use the periodogram.
    #[default]
    Auto,
    /// Zero-padded periodogram; `fft_length` defaults to `next_pow2(N)`.
    Periodogram { fft_length: Option<usize> },
    /// Averaged Hann-windowed periodograms; `fft_length` defaults to the
    /// window length.
    Welch {
        window_len: usize,
        overlap: f64,
        fft_length: Option<usize>,
    },
}

/// `|FFT_L(x)|² / L`, zero padding `x` to `L` samples.
pub fn psd_periodogram(signal: &Signal, fft_length: usize) -> Result<SpectrumEstimate> {
    if fft_length < signal.len() {
        return Err(Error::InvalidArgument("FFT length shorter than signal"));
    }
    let spectrum = fft_real(signal.samples(), fft_length)?;
    SpectrumEstimate::new(power(&spectrum), PsdMethod::Periodogram)
}

/// Welch estimate: Hann-windowed segments of `window_len` samples advanced
/// by `round(window_len·(1 - overlap))`, each transformed with `L` points,
/// and the `|·|²/L` values averaged.
pub fn psd_welch(
    signal: &Signal,
    window_len: usize,
    overlap: f64,
    fft_length: usize,
) -> Result<SpectrumEstimate> {
    let n = signal.len();
    if window_len == 0 || window_len > n {
        return Err(Error::InvalidArgument(
            "window must be nonempty and no longer than the signal",
        ));
    }
    if !(0.0..1.0).contains(&overlap) {
        return Err(Error::InvalidArgument("overlap must lie in [0, 1)"));
    }
    if fft_length < window_len {
        return Err(Error::InvalidArgument("FFT length shorter than window"));
    }
    let window = hann(window_len);
    let step = (libm::round(window_len as f64 * (1.0 - overlap)) as usize).max(1);
    let x = signal.samples();
    let mut acc = alloc::vec![0.0; fft_length];
    let mut segments = 0usize;
    let mut seg = Vec::with_capacity(window_len);
    let mut start = 0;
    while start + window_len <= n {
        seg.clear();
        seg.extend(
            x[start..start + window_len]
                .iter()
                .zip(&window)
                .map(|(a, w)| a * w),
        );
        for (a, p) in acc.iter_mut().zip(power(&fft_real(&seg, fft_length)?)) {
            *a += p;
        }
        segments += 1;
        start += step;
    }
    let scale = 1.0 / segments as f64;
    acc.iter_mut().for_each(|a| *a *= scale);
    SpectrumEstimate::new(acc, PsdMethod::Welch)
}

/// Estimates the power spectrum with the chosen estimator.
pub fn estimate_psd(signal: &Signal, estimator: &Estimator) -> Result<SpectrumEstimate> {
    let n = signal.len();
    match *estimator {
        Estimator::Auto if n < MIN_WELCH_LENGTH => {
            log::warn!("signal of {n} samples is too short for Welch; using the periodogram");
            psd_periodogram(signal, next_pow2(n))
        }
        Estimator::Auto => {
            let window = prev_pow2(n / 8).min(MAX_WELCH_WINDOW);
            psd_welch(signal, window, DEFAULT_OVERLAP, window)
        }
        Estimator::Periodogram { fft_length } => {
            psd_periodogram(signal, fft_length.unwrap_or(next_pow2(n)))
        }
        Estimator::Welch {
            window_len,
            overlap,
            fft_length,
        } => psd_welch(
            signal,
            window_len,
            overlap,
            fft_length.unwrap_or(window_len),
        ),
    }
}

/// `|H|²` from response samples on the grid `2πm/L`.
pub fn psd_from_response(response: &[Complex64]) -> Result<SpectrumEstimate> {
    SpectrumEstimate::new(
        response.iter().map(|h| h.norm_sqr()).collect(),
        PsdMethod::Model,
    )
}

fn power(spectrum: &[Complex64]) -> Vec<f64> {
    let l = spectrum.len() as f64;
    spectrum.iter().map(|x| x.norm_sqr() / l).collect()
}

/// Periodic Hann window.
fn hann(len: usize) -> Vec<f64> {
    (0..len)
        .map(|k| 0.5 - 0.5 * libm::cos(2.0 * PI * k as f64 / len as f64))
        .collect()
}
