use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::psd::{estimate_psd, Estimator, SpectrumEstimate};
use super::unwrap::unwrap_phase;
use crate::error::{Error, Result};
use crate::fft::{fft_real, ifft};
use crate::lti::{Signal, StateSpaceModel, ZeroPoleGain};

/// Number of coefficients kept when the caller does not choose.
pub const DEFAULT_ORDER: usize = 256;
/// Spectrum bins below this fraction of the largest magnitude are nulls.
pub const SPECTRAL_NULL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CepstrumKind {
    /// Even sequence from the log power spectrum.
    Power,
    /// Two-sided sequence from the complex log spectrum.
    Complex,
}

/// Cepstrum coefficients `c(k)` for `k = -K..=K`.
///
/// `c(0)` holds the gain term and is never used in distances. Power
/// cepstra are even by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct CepstrumSequence {
    kind: CepstrumKind,
    /// `c(0), c(1), …, c(K)`.
    causal: Vec<f64>,
    /// `c(-1), c(-2), …, c(-K)`.
    anticausal: Vec<f64>,
}

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

impl CepstrumSequence {
    /// Power cepstrum from `c(0..=K)`.
    pub fn power(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::EmptySignal);
        }
        check_finite(&coefficients)?;
        let anticausal = coefficients[1..].to_vec();
        Ok(Self {
            kind: CepstrumKind::Power,
            causal: coefficients,
            anticausal,
        })
    }

    /// Complex cepstrum from `c(0..=K)` and `c(-1), …, c(-K)`.
    pub fn complex(causal: Vec<f64>, anticausal: Vec<f64>) -> Result<Self> {
        if causal.is_empty() {
            return Err(Error::EmptySignal);
        }
        if anticausal.len() + 1 != causal.len() {
            return Err(Error::DimensionMismatch {
                what: "anticausal coefficients",
                expected: causal.len() - 1,
                found: anticausal.len(),
            });
        }
        check_finite(&causal)?;
        check_finite(&anticausal)?;
        Ok(Self {
            kind: CepstrumKind::Complex,
            causal,
            anticausal,
        })
    }

    /// The all-zero sequence of order `K`.
    pub fn zero(kind: CepstrumKind, order: usize) -> Self {
        Self {
            kind,
            causal: alloc::vec![0.0; order + 1],
            anticausal: alloc::vec![0.0; order],
        }
    }

    pub fn kind(&self) -> CepstrumKind {
        self.kind
    }

    /// Truncation order `K`.
    pub fn order(&self) -> usize {
        self.anticausal.len()
    }

    /// `c(k)`, or 0 beyond the truncation order.
    pub fn at(&self, k: isize) -> f64 {
        let m = k.unsigned_abs();
        let side = if k >= 0 {
            self.causal.get(m)
        } else {
            self.anticausal.get(m - 1)
        };
        side.copied().unwrap_or(0.0)
    }

    pub fn zeroth(&self) -> f64 {
        self.causal[0]
    }

    /// `c(1), …, c(K)`.
    pub fn positive(&self) -> &[f64] {
        &self.causal[1..]
    }

    /// `c(-1), …, c(-K)`.
    pub fn negative(&self) -> &[f64] {
        &self.anticausal
    }

    /// Keeps coefficients up to `|k| ≤ order`.
    pub fn truncated(&self, order: usize) -> Self {
        let order = order.min(self.order());
        Self {
            kind: self.kind,
            causal: self.causal[..=order].to_vec(),
            anticausal: self.anticausal[..order].to_vec(),
        }
    }

    /// Coefficient-wise `self - other` up to the common order.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        if self.kind != other.kind {
            return Err(Error::KindMismatch);
        }
        let order = self.order().min(other.order());
        let sub = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>();
        Ok(Self {
            kind: self.kind,
            causal: sub(&self.causal[..=order], &other.causal[..=order]),
            anticausal: sub(&self.anticausal[..order], &other.anticausal[..order]),
        })
    }
}

/// Inverse FFT of `log Φ`, symmetrized and truncated to `K ≤ L/2`.
pub fn power_cepstrum_from_psd(psd: &SpectrumEstimate, order: usize) -> Result<CepstrumSequence> {
    let l = psd.len();
    let mut buf = Vec::with_capacity(l);
    for (bin, &v) in psd.values().iter().enumerate() {
        if !(v > 0.0) {
            return Err(Error::LogOfNonpositive { bin });
        }
        buf.push(Complex64::new(libm::log(v), 0.0));
    }
    ifft(&mut buf)?;
    let order = order.min(l / 2);
    let coeffs = (0..=order)
        .map(|k| {
            if k == 0 {
                buf[0].re
            } else {
                0.5 * (buf[k].re + buf[(l - k) % l].re)
            }
        })
        .collect();
    CepstrumSequence::power(coeffs)
}

/// Power cepstrum of an estimated spectrum.
pub fn power_cepstrum_of_signal(
    signal: &Signal,
    estimator: &Estimator,
    order: usize,
) -> Result<CepstrumSequence> {
    power_cepstrum_from_psd(&estimate_psd(signal, estimator)?, order)
}

/// `c_h = c_y - c_u` from an input/output pair.
pub fn transfer_cepstrum_from_io(
    input: &Signal,
    output: &Signal,
    estimator: &Estimator,
    order: usize,
) -> Result<CepstrumSequence> {
    input.same_length(output)?;
    let phi_u = estimate_psd(input, estimator)?;
    if let Some(bin) = phi_u.values().iter().position(|&v| !(v > 0.0)) {
        return Err(Error::DegenerateInputSpectrum { bin });
    }
    let cu = power_cepstrum_from_psd(&phi_u, order)?;
    let cy = power_cepstrum_of_signal(output, estimator, order)?;
    cy.difference(&cu)
}

/// Power cepstrum in closed form from the roots.
///
/// For `k ≠ 0`, `c(k) = Σα^|k|/|k| + Σγ^-|k|/|k| - Σβ^|k|/|k| - Σδ^-|k|/|k|`;
/// `c(0) = log g² + Σ log|δ|² - Σ log|γ|²`.
pub fn power_cepstrum_from_zpk(zpk: &ZeroPoleGain, order: usize) -> CepstrumSequence {
    let mut c = alloc::vec![0.0; order + 1];
    c[0] = 2.0 * libm::log(libm::fabs(zpk.gain()))
        + zpk
            .max_zeros()
            .iter()
            .map(|d| 2.0 * libm::log(d.norm()))
            .sum::<f64>()
        - zpk
            .unstable_poles()
            .iter()
            .map(|g| 2.0 * libm::log(g.norm()))
            .sum::<f64>();
    let add = |c: &mut [f64], root: Complex64, sign: f64| {
        let mut pw = Complex64::new(1.0, 0.0);
        for (k, ck) in c.iter_mut().enumerate().skip(1) {
            pw *= root;
            *ck += sign * pw.re / k as f64;
        }
    };
    for &a in zpk.stable_poles() {
        add(&mut c, a, 1.0);
    }
    for &g in zpk.unstable_poles() {
        add(&mut c, g.inv(), 1.0);
    }
    for &b in zpk.min_zeros() {
        add(&mut c, b, -1.0);
    }
    for &d in zpk.max_zeros() {
        add(&mut c, d.inv(), -1.0);
    }
    CepstrumSequence::power(c).expect("finite by construction")
}

/// Power cepstrum from the trace formula
/// `c(k) = (tr Aᵏ - tr (A - BD⁻¹C)ᵏ) / k`, with `c(0) = log D²`.
pub fn power_cepstrum_from_state_space(
    model: &StateSpaceModel,
    order: usize,
) -> Result<CepstrumSequence> {
    if !model.is_minimum_phase_stable()? {
        return Err(Error::NotMinimumPhaseStable);
    }
    let a = model.a();
    let ai = model.invert()?.a().clone();
    let n = model.order();
    let mut pa = DMatrix::<f64>::identity(n, n);
    let mut pi = DMatrix::<f64>::identity(n, n);
    let mut c = Vec::with_capacity(order + 1);
    c.push(2.0 * libm::log(libm::fabs(model.d())));
    for k in 1..=order {
        pa = &pa * a;
        pi = &pi * &ai;
        c.push((pa.trace() - pi.trace()) / k as f64);
    }
    CepstrumSequence::power(c)
}

/// Complex cepstrum of a signal from an `L`-point FFT.
///
/// The log magnitude and unwrapped phase are transformed back; negative
/// indices come from the upper half of the inverse transform. A negative
/// DC value is sign flipped and the integer linear-phase term (a pure delay)
/// is removed before inversion; neither affects `c(k)` for `k ≠ 0` of a
/// delay-free system. `K` is capped at `L/2 - 1`.
pub fn complex_cepstrum(
    signal: &Signal,
    fft_length: usize,
    order: usize,
) -> Result<CepstrumSequence> {
    if fft_length < signal.len() {
        return Err(Error::InvalidArgument("FFT length shorter than signal"));
    }
    complex_cepstrum_from_response(&fft_real(signal.samples(), fft_length)?, order)
}

/// Complex cepstrum from response samples on the grid `2πm/L` of a real
/// system, see [`complex_cepstrum`].
pub fn complex_cepstrum_from_response(
    response: &[Complex64],
    order: usize,
) -> Result<CepstrumSequence> {
    let l = response.len();
    if l < 4 || !l.is_power_of_two() {
        return Err(Error::InvalidArgument(
            "response length must be a power of two ≥ 4",
        ));
    }
    let max = response.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if let Some(bin) = response
        .iter()
        .position(|x| !(x.norm() > SPECTRAL_NULL_TOL * max))
    {
        return Err(Error::SpectralNull { bin });
    }
    let sign = if response[0].re < 0.0 { -1.0 } else { 1.0 };
    let half = l / 2;
    let principal: Vec<f64> = response[..=half].iter().map(|x| (x * sign).arg()).collect();
    let mut phase = unwrap_phase(&principal);
    let delay = libm::round(phase[half] / PI);
    for (m, p) in phase.iter_mut().enumerate() {
        *p -= delay * PI * m as f64 / half as f64;
    }
    let mut buf = alloc::vec![Complex64::new(0.0, 0.0); l];
    for m in 0..=half {
        let v = Complex64::new(libm::log(response[m].norm()), phase[m]);
        buf[m] = v;
        if m > 0 && m < half {
            buf[l - m] = v.conj();
        }
    }
    buf[half].im = 0.0;
    ifft(&mut buf)?;
    let order = order.min(half - 1);
    let causal = (0..=order).map(|k| buf[k].re).collect();
    let anticausal = (1..=order).map(|k| buf[l - k].re).collect();
    CepstrumSequence::complex(causal, anticausal)
}

/// `ĉ_h` from an input/output pair.
///
/// The phase of `Y/U` is unwrapped as a whole rather than each spectrum
/// separately, which keeps near-nulls of the input spectrum from
/// corrupting the unwrapping.
pub fn transfer_complex_cepstrum_from_io(
    input: &Signal,
    output: &Signal,
    fft_length: usize,
    order: usize,
) -> Result<CepstrumSequence> {
    input.same_length(output)?;
    if fft_length < input.len() {
        return Err(Error::InvalidArgument("FFT length shorter than signal"));
    }
    let u = fft_real(input.samples(), fft_length)?;
    let y = fft_real(output.samples(), fft_length)?;
    let umax = u.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if let Some(bin) = u
        .iter()
        .position(|x| !(x.norm() > SPECTRAL_NULL_TOL * umax))
    {
        return Err(Error::SpectralNull { bin });
    }
    let ratio: Vec<Complex64> = y.iter().zip(&u).map(|(a, b)| a / b).collect();
    complex_cepstrum_from_response(&ratio, order)
}

/// Complex cepstrum in closed form from the roots.
///
/// `ĉ(k) = Σα^k/k - Σβ^k/k` for `k > 0`,
/// `ĉ(-k) = Σγ^-k/k - Σδ^-k/k` for `k > 0`, and
/// `ĉ(0) = log|g| + Σ log|δ| - Σ log|γ|`.
pub fn complex_cepstrum_from_zpk(zpk: &ZeroPoleGain, order: usize) -> CepstrumSequence {
    let mut causal = alloc::vec![0.0; order + 1];
    let mut anticausal = alloc::vec![0.0; order];
    causal[0] = libm::log(libm::fabs(zpk.gain()))
        + zpk
            .max_zeros()
            .iter()
            .map(|d| libm::log(d.norm()))
            .sum::<f64>()
        - zpk
            .unstable_poles()
            .iter()
            .map(|g| libm::log(g.norm()))
            .sum::<f64>();
    let add = |c: &mut [f64], root: Complex64, sign: f64| {
        let mut pw = Complex64::new(1.0, 0.0);
        for (k, ck) in c.iter_mut().enumerate() {
            pw *= root;
            *ck += sign * pw.re / (k + 1) as f64;
        }
    };
    for &a in zpk.stable_poles() {
        add(&mut causal[1..], a, 1.0);
    }
    for &b in zpk.min_zeros() {
        add(&mut causal[1..], b, -1.0);
    }
    for &g in zpk.unstable_poles() {
        add(&mut anticausal, g.inv(), 1.0);
    }
    for &d in zpk.max_zeros() {
        add(&mut anticausal, d.inv(), -1.0);
    }
    CepstrumSequence::complex(causal, anticausal).expect("finite by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lti::{maximum_phase_reference, minimum_phase_reference, mixed_phase_reference};
    use crate::spectral::psd::{psd_from_response, PsdMethod};
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn one_pole_response(n: usize, a: f64) -> Signal {
        Signal::from_samples((0..n).map(|k| libm::pow(a, k as f64)).collect()).unwrap()
    }

    fn one_pole_filter(u: &[f64], a: f64) -> Vec<f64> {
        let mut prev = 0.0;
        u.iter()
            .map(|&x| {
                prev = a * prev + x;
                prev
            })
            .collect()
    }

    fn noise(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    #[test]
    fn sequence_accessors() {
        let c = CepstrumSequence::complex(vec![9.0, 1.0, 2.0], vec![-1.0, -2.0]).unwrap();
        assert_eq!(
            (c.at(0), c.at(2), c.at(-2), c.at(5), c.at(-5)),
            (9.0, 2.0, -2.0, 0.0, 0.0)
        );
        assert_eq!(c.order(), 2);
        assert_eq!(c.truncated(1).negative(), &[-1.0]);
        let p = CepstrumSequence::power(vec![0.0, 1.0, 2.0]).unwrap();
        assert_eq!(p.at(-1), p.at(1));
        assert_eq!(p.difference(&c), Err(Error::KindMismatch));
        assert!(CepstrumSequence::complex(vec![0.0], vec![1.0]).is_err());
        assert!(CepstrumSequence::power(vec![f64::NAN]).is_err());
    }

    #[test]
    fn flat_spectrum_has_zero_cepstrum() {
        let psd = SpectrumEstimate::new(vec![1.0; 64], PsdMethod::Model).unwrap();
        let c = power_cepstrum_from_psd(&psd, 10).unwrap();
        assert!(c
            .positive()
            .iter()
            .chain([c.zeroth()].iter())
            .all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn nonpositive_bin_is_rejected() {
        let mut v = vec![1.0; 8];
        v[3] = 0.0;
        let psd = SpectrumEstimate::new(v, PsdMethod::Model).unwrap();
        assert_eq!(
            power_cepstrum_from_psd(&psd, 4),
            Err(Error::LogOfNonpositive { bin: 3 })
        );
    }

    #[test]
    fn dense_model_spectrum_matches_series() {
        let zpk = ZeroPoleGain::from_real(&[0.5], &[], 1.0).unwrap();
        let psd = psd_from_response(&zpk.response_on_grid(1024)).unwrap();
        let c = power_cepstrum_from_psd(&psd, 8).unwrap();
        assert!((c.at(1) - 0.5).abs() < 1e-6);
        assert!((c.at(2) - 0.125).abs() < 1e-6);
        assert!(c.zeroth().abs() < 1e-12);
        assert_eq!(power_cepstrum_from_psd(&psd, 5000).unwrap().order(), 512);
    }

    #[test]
    fn impulse_has_zero_cepstrum() {
        let p = power_cepstrum_of_signal(
            &Signal::impulse(256).unwrap(),
            &Estimator::Periodogram { fft_length: None },
            16,
        )
        .unwrap();
        assert!(p.positive().iter().all(|v| v.abs() < 1e-14));
        assert_eq!(p.order(), 16);
    }

    #[test]
    fn single_pole_impulse_response_estimate() {
        // A Hann window would taper away the transient, so use the periodogram.
        let h = one_pole_response(1 << 14, 0.5);
        let c =
            power_cepstrum_of_signal(&h, &Estimator::Periodogram { fft_length: None }, 32).unwrap();
        assert!((c.at(1) - 0.5).abs() < 1e-3, "{}", c.at(1));
    }

    #[test]
    fn scaling_changes_only_zeroth() {
        let x = Signal::from_samples(noise(2048, 5)).unwrap();
        let c1 = power_cepstrum_of_signal(&x, &Estimator::default(), 20).unwrap();
        let c2 =
            power_cepstrum_of_signal(&x.scaled(3.0).unwrap(), &Estimator::default(), 20).unwrap();
        assert!((c2.zeroth() - c1.zeroth() - 2.0 * libm::log(3.0)).abs() < 1e-12);
        for (a, b) in c1.positive().iter().zip(c2.positive()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_io_has_zero_transfer_cepstrum() {
        let u = Signal::from_samples(noise(4096, 2)).unwrap();
        let c = transfer_cepstrum_from_io(&u, &u, &Estimator::default(), 32).unwrap();
        assert!(c.positive().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn white_noise_through_one_pole() {
        let u = noise(1 << 14, 9);
        let y = one_pole_filter(&u, 0.5);
        let u = Signal::from_samples(u).unwrap();
        let y = Signal::from_samples(y).unwrap();
        let c = transfer_cepstrum_from_io(&u, &y, &Estimator::default(), 32).unwrap();
        assert!((c.at(1) - 0.5).abs() < 1e-2, "{}", c.at(1));
        let short = Signal::from_samples(vec![1.0; 10]).unwrap();
        assert!(matches!(
            transfer_cepstrum_from_io(&short, &u, &Estimator::default(), 4),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn degenerate_input_spectrum() {
        let u = Signal::from_samples(vec![0.0; 256]).unwrap();
        let y = Signal::from_samples(noise(256, 0)).unwrap();
        assert!(matches!(
            transfer_cepstrum_from_io(&u, &y, &Estimator::default(), 4),
            Err(Error::DegenerateInputSpectrum { .. })
        ));
    }

    #[test]
    fn zpk_power_cepstrum() {
        let c = power_cepstrum_from_zpk(&ZeroPoleGain::from_real(&[0.5], &[], 1.0).unwrap(), 3);
        assert_eq!((c.at(1), c.at(2)), (0.5, 0.125));
        assert!((c.at(3) - 0.125 / 3.0).abs() < 1e-16);
        let g = power_cepstrum_from_zpk(&ZeroPoleGain::gain_only(2.5).unwrap(), 5);
        assert!(g.positive().iter().all(|v| *v == 0.0));
        let inv = power_cepstrum_from_zpk(&ZeroPoleGain::from_real(&[2.0], &[], 1.0).unwrap(), 3);
        assert_eq!(inv.positive(), c.positive());
    }

    #[test]
    fn zpk_power_cepstrum_matches_exact_spectrum() {
        for zpk in [
            minimum_phase_reference(),
            maximum_phase_reference(),
            mixed_phase_reference(),
        ] {
            let exact = power_cepstrum_from_zpk(&zpk, 30);
            let psd = psd_from_response(&zpk.response_on_grid(4096)).unwrap();
            let est = power_cepstrum_from_psd(&psd, 30).unwrap();
            for k in 0..=30 {
                assert!((exact.at(k) - est.at(k)).abs() < 1e-9, "k={k}");
            }
        }
    }

    #[test]
    fn trace_formula() {
        let m = StateSpaceModel::from_slices(&[0.5], &[1.0], &[1.0], 1.0).unwrap();
        let c = power_cepstrum_from_state_space(&m, 3).unwrap();
        assert_eq!(c.at(1), 1.0);
        let b0 = StateSpaceModel::from_slices(&[0.5, 0.1, 0.0, 0.3], &[0.0, 0.0], &[1.0, 2.0], 1.0)
            .unwrap();
        let c0 = power_cepstrum_from_state_space(&b0, 10).unwrap();
        assert!(c0.positive().iter().all(|v| *v == 0.0));
        let unstable = StateSpaceModel::from_slices(&[1.5], &[1.0], &[0.1], 1.0).unwrap();
        assert_eq!(
            power_cepstrum_from_state_space(&unstable, 3),
            Err(Error::NotMinimumPhaseStable)
        );
    }

    #[test]
    fn trace_formula_matches_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut checked = 0;
        while checked < 20 {
            let n = rng.random_range(1..=4);
            let a: Vec<f64> = (0..n * n).map(|_| rng.random_range(-0.4..0.4)).collect();
            let b: Vec<f64> = (0..n).map(|_| rng.random_range(-0.5..0.5)).collect();
            let c: Vec<f64> = (0..n).map(|_| rng.random_range(-0.5..0.5)).collect();
            let m = StateSpaceModel::from_slices(&a, &b, &c, 1.0).unwrap();
            if !m.is_minimum_phase_stable().unwrap() {
                continue;
            }
            let Ok(zpk) = m.to_zpk() else { continue };
            let t = power_cepstrum_from_state_space(&m, 20).unwrap();
            let z = power_cepstrum_from_zpk(&zpk, 20);
            for k in 1..=20 {
                assert!((t.at(k) - z.at(k)).abs() < 1e-10);
            }
            checked += 1;
        }
    }

    #[test]
    fn complex_cepstrum_of_impulse() {
        let c = complex_cepstrum(&Signal::impulse(8).unwrap(), 16, 4).unwrap();
        assert!(c
            .positive()
            .iter()
            .chain(c.negative())
            .all(|v| v.abs() < 1e-15));
        assert!(c.zeroth().abs() < 1e-15);
    }

    #[test]
    fn complex_cepstrum_of_one_pole() {
        let c = complex_cepstrum(&one_pole_response(256, 0.5), 1024, 10).unwrap();
        for k in 1..=10isize {
            assert!(
                (c.at(k) - libm::pow(0.5, k as f64) / k as f64).abs() < 1e-12,
                "k={k}"
            );
            assert!(c.at(-k).abs() < 1e-12);
        }
    }

    #[test]
    fn complex_cepstrum_removes_sign_and_delay() {
        let h = one_pole_response(256, 0.5);
        let mut shifted = vec![0.0; 3];
        shifted.extend(h.samples().iter().map(|v| -2.0 * v));
        let a = complex_cepstrum(&h, 1024, 10).unwrap();
        let b = complex_cepstrum(&Signal::from_samples(shifted).unwrap(), 1024, 10).unwrap();
        for k in 1..=10isize {
            assert!((a.at(k) - b.at(k)).abs() < 1e-12 && (a.at(-k) - b.at(-k)).abs() < 1e-12);
        }
        assert!((b.zeroth() - libm::log(2.0)).abs() < 1e-12);
    }

    #[test]
    fn spectral_null() {
        let x = Signal::from_samples(vec![1.0, -1.0]).unwrap();
        assert!(matches!(
            complex_cepstrum(&x, 4, 1),
            Err(Error::SpectralNull { bin: 0 })
        ));
    }

    #[test]
    fn reference_systems_from_response() {
        for zpk in [
            minimum_phase_reference(),
            maximum_phase_reference(),
            mixed_phase_reference(),
        ] {
            let exact = complex_cepstrum_from_zpk(&zpk, 20);
            let est = complex_cepstrum_from_response(&zpk.response_on_grid(4096), 20).unwrap();
            for k in -20..=20isize {
                assert!((exact.at(k) - est.at(k)).abs() < 1e-9, "k={k}");
            }
        }
    }

    #[test]
    fn reference_zpk_sides() {
        let min = complex_cepstrum_from_zpk(&minimum_phase_reference(), 5);
        assert!((min.at(1) - 0.6).abs() < 1e-15);
        assert!(min.negative().iter().all(|v| *v == 0.0));
        assert!(min.positive().iter().all(|v| *v != 0.0));
        let max = complex_cepstrum_from_zpk(&maximum_phase_reference(), 5);
        assert!(max.positive().iter().all(|v| *v == 0.0));
        let gain = complex_cepstrum_from_zpk(&ZeroPoleGain::gain_only(-3.0).unwrap(), 5);
        assert!((gain.zeroth() - libm::log(3.0)).abs() < 1e-15);
        assert!(gain
            .positive()
            .iter()
            .chain(gain.negative())
            .all(|v| *v == 0.0));
    }

    #[test]
    fn transfer_complex_cepstrum_of_one_pole() {
        let u = noise(4096, 3);
        let y = one_pole_filter(&u, 0.5);
        let c = transfer_complex_cepstrum_from_io(
            &Signal::from_samples(u).unwrap(),
            &Signal::from_samples(y).unwrap(),
            8192,
            10,
        )
        .unwrap();
        assert!((c.at(1) - 0.5).abs() < 0.05, "{}", c.at(1));
        assert!(c.at(-1).abs() < 0.05, "{}", c.at(-1));
    }
}
