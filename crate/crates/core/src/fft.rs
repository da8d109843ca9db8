//! Iterative radix-2 FFT over `Complex64`.
//!
//! Only power-of-two lengths are supported; every spectral routine in this
//! crate pads to such a length first.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

use crate::error::{Error, Result};

fn check_len(n: usize) -> Result<()> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::InvalidArgument(
            "FFT length must be a nonzero power of two",
        ));
    }
    Ok(())
}

fn transform(buf: &mut [Complex64], sign: f64) -> Result<()> {
    let n = buf.len();
    check_len(n)?;
    if n == 1 {
        return Ok(());
    }

    // bit-reversal permutation
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            buf.swap(i, j);
        }
    }

    // twiddles computed directly, no recurrence
    let half = n / 2;
    let twiddles: Vec<Complex64> = (0..half)
        .map(|k| {
            let (s, c) = libm::sincos(sign * 2.0 * PI * k as f64 / n as f64);
            Complex64::new(c, s)
        })
        .collect();

    let mut len = 2;
    while len <= n {
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..len / 2 {
                let w = twiddles[k * stride];
                let a = buf[start + k];
                let b = buf[start + k + len / 2] * w;
                buf[start + k] = a + b;
                buf[start + k + len / 2] = a - b;
            }
        }
        len <<= 1;
    }
    Ok(())
}

/// Forward DFT, `X[m] = Σ x[k] e^{-2πimk/n}`, in place.
pub fn fft(buf: &mut [Complex64]) -> Result<()> {
    transform(buf, -1.0)
}

/// Inverse DFT including the `1/n` factor, in place.
pub fn ifft(buf: &mut [Complex64]) -> Result<()> {
    transform(buf, 1.0)?;
    let scale = 1.0 / buf.len() as f64;
    buf.iter_mut().for_each(|x| *x *= scale);
    Ok(())
}

/// Zero-pads a real sequence to `n` and returns its forward transform.
pub fn fft_real(x: &[f64], n: usize) -> Result<Vec<Complex64>> {
    if x.len() > n {
        return Err(Error::InvalidArgument("FFT length shorter than input"));
    }
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    buf.resize(n, Complex64::new(0.0, 0.0));
    fft(&mut buf)?;
    Ok(buf)
}

/// Smallest power of two that is `>= n` (and at least 1).
pub fn next_pow2(n: usize) -> usize {
    n.max(1).next_power_of_two()
}

/// Largest power of two that is `<= n`; `n` must be positive.
pub fn prev_pow2(n: usize) -> usize {
    debug_assert!(n > 0);
    1 << (usize::BITS - 1 - n.leading_zeros())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn naive_dft(x: &[Complex64]) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|m| {
                x.iter()
                    .enumerate()
                    .fold(Complex64::new(0.0, 0.0), |acc, (k, &v)| {
                        let ang = -2.0 * PI * (m * k) as f64 / n as f64;
                        acc + v * Complex64::new(libm::cos(ang), libm::sin(ang))
                    })
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft() {
        let x: Vec<Complex64> = (0..32)
            .map(|k| {
                Complex64::new(
                    libm::sin(k as f64 * 0.37) + 0.1 * k as f64,
                    libm::cos(k as f64),
                )
            })
            .collect();
        let mut y = x.clone();
        fft(&mut y).unwrap();
        for (a, b) in y.iter().zip(naive_dft(&x)) {
            assert!((a - b).norm() < 1e-11);
        }
    }

    #[test]
    fn inverse_round_trip() {
        let x: Vec<Complex64> = (0..64)
            .map(|k| Complex64::new(k as f64, -(k as f64) * 0.5))
            .collect();
        let mut y = x.clone();
        fft(&mut y).unwrap();
        ifft(&mut y).unwrap();
        for (a, b) in y.iter().zip(&x) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_power_of_two() {
        let mut buf = vec![Complex64::new(0.0, 0.0); 12];
        assert!(fft(&mut buf).is_err());
        assert!(fft_real(&[1.0; 5], 4).is_err());
    }

    #[test]
    fn pow2_helpers() {
        assert_eq!(next_pow2(1101), 2048);
        assert_eq!(next_pow2(1024), 1024);
        assert_eq!(prev_pow2(2048), 2048);
        assert_eq!(prev_pow2(2047), 1024);
        assert_eq!(prev_pow2(137), 128);
    }
}
