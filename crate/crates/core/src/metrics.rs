//! Weighted cepstral distance and norm, their pole-zero closed forms, and
//! the plain time-domain baselines.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lti::{Signal, ZeroPoleGain, MULTIPLICITY_TOL};
use crate::spectral::{power_cepstrum_from_zpk, CepstrumKind, CepstrumSequence};

/// A truncated weighted cepstral sum with an estimate of the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedCepstralResult {
    /// `Σ_{k=1}^{K} k·Δ(k)²`.
    pub squared_value: f64,
    /// Truncation order `K`.
    pub order: usize,
    /// Bound on `Σ_{k>K} k·Δ(k)²`; infinite when no decay is evident.
    pub tail_bound: f64,
}

impl WeightedCepstralResult {
    /// The distance or norm itself, `sqrt(squared_value)`.
    pub fn value(&self) -> f64 {
        libm::sqrt(self.squared_value)
    }
}

/// `Σ_{k>K} ρ^{2k}/k` bounded by `ρ^{2(K+1)} / ((K+1)(1 - ρ²))`, scaled by
/// `n²` for `n` geometric terms of ratio at most `ρ`.
fn geometric_tail(rho: f64, order: usize, terms: f64) -> f64 {
    if rho <= 0.0 {
        return 0.0;
    }
    if rho >= 1.0 {
        return f64::INFINITY;
    }
    let k1 = (order + 1) as f64;
    terms * terms * libm::pow(rho, 2.0 * k1) / (k1 * (1.0 - rho * rho))
}

/// Weighted cepstral distance `d² = Σ_{k=1}^{K} k (c₁(k) - c₂(k))²` over the
/// common order. The tail bound assumes `|Δ(k)| ≈ ρ^k/k` with `ρ` read off
/// the last retained coefficient.
pub fn weighted_cepstral_distance(
    c1: &CepstrumSequence,
    c2: &CepstrumSequence,
) -> Result<WeightedCepstralResult> {
    if c1.kind() != CepstrumKind::Power || c2.kind() != CepstrumKind::Power {
        return Err(Error::KindMismatch);
    }
    let order = c1.order().min(c2.order());
    let mut sum = 0.0;
    let mut last = 0.0;
    for k in 1..=order {
        let d = c1.at(k as isize) - c2.at(k as isize);
        sum += k as f64 * d * d;
        last = d;
    }
    let tail_bound = if order == 0 {
        f64::INFINITY
    } else {
        let rho = libm::pow(libm::fabs(last) * order as f64, 1.0 / order as f64);
        geometric_tail(rho, order, 1.0)
    };
    Ok(WeightedCepstralResult {
        squared_value: sum,
        order,
        tail_bound,
    })
}

/// Weighted cepstral norm `Σ k·c(k)²`, the distance to the zero cepstrum.
pub fn weighted_cepstral_norm(c: &CepstrumSequence) -> Result<WeightedCepstralResult> {
    weighted_cepstral_distance(c, &CepstrumSequence::zero(CepstrumKind::Power, c.order()))
}

/// Truncated norm series of a model with the tail bounded from its roots.
pub fn series_norm_from_zpk(zpk: &ZeroPoleGain, order: usize) -> WeightedCepstralResult {
    let c = power_cepstrum_from_zpk(zpk, order);
    let mut r = weighted_cepstral_norm(&c).expect("power kind");
    r.tail_bound = tail_bound_from_roots(zpk, order);
    r
}

/// `n² ρ^{2(K+1)} / ((K+1)(1 - ρ²))` with `n` roots of folded radius `ρ`.
pub fn tail_bound_from_roots(zpk: &ZeroPoleGain, order: usize) -> f64 {
    geometric_tail(zpk.folded_radius(), order, zpk.root_count() as f64)
}

/// Squared Frobenius norm of the `m×m` Hankel matrix `H(a,b) = c(a+b+1)`.
pub fn hs_hankel_norm(c: &CepstrumSequence, m: usize) -> Result<f64> {
    if c.kind() != CepstrumKind::Power {
        return Err(Error::KindMismatch);
    }
    if m == 0 || 2 * m > c.order() {
        return Err(Error::InvalidArgument(
            "Hankel size must satisfy 1 ≤ m ≤ K/2",
        ));
    }
    let h = DMatrix::from_fn(m, m, |a, b| c.at((a + b + 1) as isize));
    Ok(h.norm_squared())
}

fn log_factor(acc: &mut Complex64, a: Complex64, b: Complex64) {
    *acc += (Complex64::new(1.0, 0.0) - a * b.conj()).ln();
}

/// `Σ_{i,j} log(1 - x_i ȳ_j)`.
fn cross(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &a in x {
        for &b in y {
            log_factor(&mut acc, a, b);
        }
    }
    acc
}

/// `Σ_{i,j} log|1 - x_i ȳ_j|²`.
fn cross_abs2(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    Complex64::new(2.0 * cross(x, y).re, 0.0)
}

fn inverses(roots: &[Complex64]) -> Vec<Complex64> {
    roots.iter().map(|r| r.inv()).collect()
}

/// Norm of a stable minimum-phase system,
/// `log[Π|1 - α_i β̄_j|² / (Π(1 - α_i ᾱ_j) Π(1 - β_i β̄_j))]`.
pub fn closed_form_norm_min_phase(zpk: &ZeroPoleGain) -> Result<f64> {
    if !zpk.unstable_poles().is_empty() || !zpk.max_zeros().is_empty() {
        return Err(Error::WrongPhaseType {
            expected: "stable minimum-phase",
        });
    }
    Ok(min_phase_form(zpk.stable_poles(), zpk.min_zeros()))
}

fn min_phase_form(p: &[Complex64], z: &[Complex64]) -> f64 {
    (cross_abs2(p, z) - cross(p, p) - cross(z, z)).re
}

/// Norm of an unstable maximum-phase system: the minimum-phase form on the
/// inverses `1/γ` and `1/δ`.
pub fn closed_form_norm_max_phase(zpk: &ZeroPoleGain) -> Result<f64> {
    if !zpk.stable_poles().is_empty() || !zpk.min_zeros().is_empty() {
        return Err(Error::WrongPhaseType {
            expected: "unstable maximum-phase",
        });
    }
    Ok(min_phase_form(
        &inverses(zpk.unstable_poles()),
        &inverses(zpk.max_zeros()),
    ))
}

/// Norm of an arbitrary system, evaluated factor group by factor group:
///
/// ```text
///       Π|1-αβ̄|² Π|1-αδ̄⁻¹|² Π|1-βγ̄⁻¹|² Π|1-γ⁻¹δ̄⁻¹|²
/// log ──────────────────────────────────────────────────────────────────────
///     Π(1-αᾱ) Π|1-αγ̄⁻¹|² Π(1-γ⁻¹γ̄⁻¹) Π(1-ββ̄) Π|1-βδ̄⁻¹|² Π(1-δ⁻¹δ̄⁻¹)
/// ```
pub fn closed_form_norm_mixed(zpk: &ZeroPoleGain) -> f64 {
    let a = zpk.stable_poles();
    let b = zpk.min_zeros();
    let gi = inverses(zpk.unstable_poles());
    let di = inverses(zpk.max_zeros());
    let numerator =
        cross_abs2(a, b) + cross_abs2(a, &di) + cross_abs2(b, &gi) + cross_abs2(&gi, &di);
    let denominator = cross(a, a)
        + cross_abs2(a, &gi)
        + cross(&gi, &gi)
        + cross(b, b)
        + cross_abs2(b, &di)
        + cross(&di, &di);
    (numerator - denominator).re
}

/// Result of [`cascade`].
#[derive(Debug, Clone, PartialEq)]
pub struct Cascade {
    /// `H₁ H₂⁻¹` after cancellation.
    pub system: ZeroPoleGain,
    /// Roots removed as coincident pole-zero pairs.
    pub cancelled: Vec<Complex64>,
}

/// `H₁ H₂⁻¹`: poles of `H₁` and zeros of `H₂` become poles, zeros of `H₁`
/// and poles of `H₂` become zeros, and coincident pole-zero pairs cancel.
pub fn cascade(h1: &ZeroPoleGain, h2: &ZeroPoleGain) -> Result<Cascade> {
    let mut poles: Vec<Complex64> = h1.poles().chain(h2.zeros()).collect();
    let mut zeros: Vec<Complex64> = h1.zeros().chain(h2.poles()).collect();
    let mut cancelled = Vec::new();
    let mut i = 0;
    while i < poles.len() {
        let p = poles[i];
        let tol = MULTIPLICITY_TOL * p.norm().max(1.0);
        match zeros.iter().position(|z| (z - p).norm() <= tol) {
            Some(j) => {
                zeros.swap_remove(j);
                poles.swap_remove(i);
                cancelled.push(p);
            }
            None => i += 1,
        }
    }
    Ok(Cascade {
        system: ZeroPoleGain::new(&poles, &zeros, h1.gain() / h2.gain())?,
        cancelled,
    })
}

/// `sqrt(Σ (y₁(k) - y₂(k))²)`.
pub fn euclidean_distance(y1: &Signal, y2: &Signal) -> Result<f64> {
    y1.same_length(y2)?;
    let s: f64 = y1
        .samples()
        .iter()
        .zip(y2.samples())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(libm::sqrt(s))
}

/// `⟨y₁, y₂⟩ / (‖y₁‖ ‖y₂‖)`, a similarity in `[-1, 1]`.
pub fn cosine_similarity(y1: &Signal, y2: &Signal) -> Result<f64> {
    y1.same_length(y2)?;
    let (a, b) = (y1.samples(), y2.samples());
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = libm::sqrt(a.iter().map(|x| x * x).sum());
    let nb = libm::sqrt(b.iter().map(|x| x * x).sum());
    if na == 0.0 || nb == 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok((dot / (na * nb)).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalStatistics {
    pub median: f64,
    pub mean: f64,
    /// Population (`1/N`) standard deviation.
    pub std_dev: f64,
}

pub fn signal_statistics(y: &Signal) -> SignalStatistics {
    let x = y.samples();
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let mut sorted = x.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    let median = if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    };
    SignalStatistics {
        median,
        mean,
        std_dev: libm::sqrt(var),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lti::{maximum_phase_reference, minimum_phase_reference, mixed_phase_reference};
    use alloc::vec;
    use proptest::prelude::*;

    fn real(poles: &[f64], zeros: &[f64]) -> ZeroPoleGain {
        ZeroPoleGain::from_real(poles, zeros, 1.0).unwrap()
    }

    fn series(zpk: &ZeroPoleGain) -> f64 {
        series_norm_from_zpk(zpk, 5000).squared_value
    }

    #[test]
    fn distance_identity_and_kind() {
        let c = power_cepstrum_from_zpk(&real(&[0.5], &[0.2]), 50);
        assert_eq!(
            weighted_cepstral_distance(&c, &c).unwrap().squared_value,
            0.0
        );
        let cc = CepstrumSequence::complex(vec![0.0, 1.0], vec![0.0]).unwrap();
        assert_eq!(
            weighted_cepstral_distance(&c, &cc),
            Err(Error::KindMismatch)
        );
        assert_eq!(weighted_cepstral_norm(&cc), Err(Error::KindMismatch));
    }

    #[test]
    fn distance_between_single_poles() {
        let c1 = power_cepstrum_from_zpk(&real(&[0.5], &[]), 5000);
        let c2 = power_cepstrum_from_zpk(&real(&[0.9], &[]), 5000);
        let d = weighted_cepstral_distance(&c1, &c2).unwrap();
        let oracle = libm::log((1.0 - 0.45) * (1.0 - 0.45) / ((1.0 - 0.25) * (1.0 - 0.81)));
        assert!((d.squared_value - oracle).abs() < 1e-12);
        assert!((oracle - 0.7528).abs() < 1e-4);
    }

    #[test]
    fn norm_of_single_pole() {
        let c = power_cepstrum_from_zpk(&real(&[0.5], &[]), 200);
        let n = weighted_cepstral_norm(&c).unwrap();
        assert!((n.squared_value + libm::log(0.75)).abs() < 1e-14);
        let neg = CepstrumSequence::power(vec![0.0, -0.5, -0.125]).unwrap();
        let pos = CepstrumSequence::power(vec![0.0, 0.5, 0.125]).unwrap();
        assert_eq!(weighted_cepstral_norm(&neg), weighted_cepstral_norm(&pos));
        let zero = CepstrumSequence::zero(CepstrumKind::Power, 10);
        assert_eq!(weighted_cepstral_norm(&zero).unwrap().squared_value, 0.0);
    }

    #[test]
    fn tail_bound_covers_the_tail() {
        let zpk = real(&[0.9, -0.7], &[0.5]);
        let exact = series(&zpk);
        for k in [5, 20, 60] {
            let r = series_norm_from_zpk(&zpk, k);
            assert!(r.squared_value <= exact);
            assert!(exact - r.squared_value <= r.tail_bound);
        }
        let c = power_cepstrum_from_zpk(&real(&[0.9], &[]), 40);
        let est = weighted_cepstral_norm(&c).unwrap();
        assert!(exact.is_finite() && est.tail_bound.is_finite() && est.tail_bound > 0.0);
    }

    #[test]
    fn hs_hankel() {
        let zero = CepstrumSequence::zero(CepstrumKind::Power, 10);
        assert_eq!(hs_hankel_norm(&zero, 5).unwrap(), 0.0);
        let mut v = vec![0.0; 11];
        v[1] = 1.0;
        let unit = CepstrumSequence::power(v).unwrap();
        for m in 1..=5 {
            assert_eq!(hs_hankel_norm(&unit, m).unwrap(), 1.0);
        }
        assert!(hs_hankel_norm(&unit, 6).is_err());
        assert!(hs_hankel_norm(&unit, 0).is_err());
    }

    #[test]
    fn hs_hankel_weights() {
        let c = power_cepstrum_from_zpk(&real(&[0.5], &[]), 200);
        let m = 64;
        let direct: f64 = (1..2 * m)
            .map(|k| (k.min(2 * m - k)) as f64 * c.at(k as isize).powi(2))
            .sum();
        assert!((hs_hankel_norm(&c, m).unwrap() - direct).abs() < 1e-15);
    }

    #[test]
    fn closed_form_min_phase_values() {
        assert_eq!(
            closed_form_norm_min_phase(&ZeroPoleGain::gain_only(2.0).unwrap()).unwrap(),
            0.0
        );
        let one = closed_form_norm_min_phase(&real(&[0.5], &[])).unwrap();
        assert!((one + libm::log(0.75)).abs() < 1e-15);
        let pz = closed_form_norm_min_phase(&real(&[0.5], &[-0.5])).unwrap();
        assert!((pz - libm::log(1.5625 / 0.5625)).abs() < 1e-14);
        assert!((pz - 4.0 * libm::atanh(0.25)).abs() < 1e-14);
        assert!((pz - series(&real(&[0.5], &[-0.5]))).abs() < 1e-12);
        assert!(closed_form_norm_min_phase(&real(&[2.0], &[])).is_err());
    }

    #[test]
    fn closed_form_max_phase_values() {
        let one = closed_form_norm_max_phase(&real(&[2.0], &[])).unwrap();
        assert!((one + libm::log(0.75)).abs() < 1e-15);
        assert_eq!(
            closed_form_norm_max_phase(&ZeroPoleGain::gain_only(1.0).unwrap()).unwrap(),
            0.0
        );
        let min = closed_form_norm_min_phase(&minimum_phase_reference()).unwrap();
        let max = closed_form_norm_max_phase(&maximum_phase_reference()).unwrap();
        assert!((min - max).abs() < 1e-14);
        assert!(closed_form_norm_max_phase(&real(&[0.5], &[])).is_err());
    }

    #[test]
    fn closed_form_mixed_values() {
        let two = closed_form_norm_mixed(&real(&[0.5, 2.0], &[]));
        assert!((two + 4.0 * libm::log(0.75)).abs() < 1e-14);
        assert!((two - series(&real(&[0.5, 2.0], &[]))).abs() < 1e-12);
        assert_eq!(
            closed_form_norm_mixed(&ZeroPoleGain::gain_only(1.0).unwrap()),
            0.0
        );
        let mixed = mixed_phase_reference();
        assert!((closed_form_norm_mixed(&mixed) - series(&mixed)).abs() < 1e-12);
    }

    #[test]
    fn reference_value() {
        let v = closed_form_norm_min_phase(&minimum_phase_reference()).unwrap();
        assert!((v - 0.671_704_279_418_306_6).abs() < 1e-13);
    }

    #[test]
    fn cascade_cases() {
        let m = real(&[0.5, 0.3], &[-0.2]);
        let c = cascade(&m, &m).unwrap();
        assert_eq!((c.system.root_count(), c.system.gain()), (0, 1.0));
        assert_eq!(c.cancelled.len(), 3);
        let c = cascade(&real(&[0.5], &[]), &real(&[0.9], &[])).unwrap();
        assert_eq!(c.system.stable_poles(), &[Complex64::new(0.5, 0.0)]);
        assert_eq!(c.system.min_zeros(), &[Complex64::new(0.9, 0.0)]);
        assert!(c.cancelled.is_empty());
        let clash = cascade(&real(&[0.5], &[]), &real(&[], &[0.5]));
        assert!(matches!(clash, Err(Error::NonSimpleRoot { .. })));
    }

    #[test]
    fn cascade_norm_is_distance() {
        let h1 = real(&[0.5, -0.3], &[0.1]);
        let h2 = real(&[0.8], &[-0.6, 0.2]);
        let c1 = power_cepstrum_from_zpk(&h1, 4096);
        let c2 = power_cepstrum_from_zpk(&h2, 4096);
        let d = weighted_cepstral_distance(&c1, &c2).unwrap().squared_value;
        let n = closed_form_norm_min_phase(&cascade(&h1, &h2).unwrap().system).unwrap();
        assert!((d - n).abs() < 1e-10);
    }

    #[test]
    fn baselines() {
        let a = Signal::from_samples(vec![1.0, 0.0]).unwrap();
        let b = Signal::from_samples(vec![0.0, 1.0]).unwrap();
        assert_eq!(euclidean_distance(&a, &a).unwrap(), 0.0);
        assert!((euclidean_distance(&a, &b).unwrap() - libm::sqrt(2.0)).abs() < 1e-15);
        assert_eq!(cosine_similarity(&a, &a).unwrap(), 1.0);
        assert_eq!(cosine_similarity(&a, &b).unwrap(), 0.0);
        let z = Signal::from_samples(vec![0.0, 0.0]).unwrap();
        assert_eq!(cosine_similarity(&a, &z), Err(Error::ZeroNorm));
        let c = Signal::from_samples(vec![1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(
            euclidean_distance(&a, &c),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn statistics() {
        let s = signal_statistics(&Signal::from_samples(vec![4.0; 5]).unwrap());
        assert_eq!((s.median, s.mean, s.std_dev), (4.0, 4.0, 0.0));
        let s = signal_statistics(&Signal::from_samples(vec![3.0, 1.0, 2.0]).unwrap());
        assert_eq!((s.median, s.mean), (2.0, 2.0));
        assert!((s.std_dev - 0.816_496_580_927_726).abs() < 1e-12);
        let s = signal_statistics(&Signal::from_samples(vec![4.0, 1.0, 2.0, 3.0]).unwrap());
        assert_eq!(s.median, 2.5);
    }

    fn roots_strategy() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(prop_oneof![-0.95..-0.05, 0.05..0.95], 0..4)
    }

    proptest! {
        #[test]
        fn distance_is_symmetric(p1 in roots_strategy(), p2 in roots_strategy()) {
            let (Ok(h1), Ok(h2)) = (ZeroPoleGain::from_real(&p1, &[], 1.0), ZeroPoleGain::from_real(&p2, &[], 1.0)) else {
                return Ok(());
            };
            let c1 = power_cepstrum_from_zpk(&h1, 64);
            let c2 = power_cepstrum_from_zpk(&h2, 64);
            let a = weighted_cepstral_distance(&c1, &c2).unwrap().squared_value;
            let b = weighted_cepstral_distance(&c2, &c1).unwrap().squared_value;
            prop_assert_eq!(a, b);
        }

        #[test]
        fn mixed_form_matches_specialized(p in roots_strategy(), z in roots_strategy()) {
            let Ok(h) = ZeroPoleGain::from_real(&p, &z, 1.0) else { return Ok(()) };
            let mixed = closed_form_norm_mixed(&h);
            prop_assert!((mixed - closed_form_norm_min_phase(&h).unwrap()).abs() <= 1e-12);
            let pi: Vec<f64> = p.iter().map(|v| 1.0 / v).collect();
            let zi: Vec<f64> = z.iter().map(|v| 1.0 / v).collect();
            let hi = ZeroPoleGain::from_real(&pi, &zi, 1.0).unwrap();
            prop_assert!((closed_form_norm_mixed(&hi) - closed_form_norm_max_phase(&hi).unwrap()).abs() <= 1e-12);
            prop_assert!((closed_form_norm_mixed(&hi) - mixed).abs() <= 1e-12);
        }
    }
}
