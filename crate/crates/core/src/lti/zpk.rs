use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::{DMatrix, DVector, RowDVector};
use num_complex::Complex64;

use super::{Signal, StateSpaceModel};
use crate::error::{Error, Result};

/// Roots closer than this to the unit circle are rejected.
pub const UNIT_CIRCLE_TOL: f64 = 1e-6;
/// Two roots closer than this (relative to their magnitude) count as repeated.
pub const MULTIPLICITY_TOL: f64 = 1e-8;
/// Roots at the origin give the trivial factor `1 - 0·z⁻¹` and are dropped.
pub const ORIGIN_TOL: f64 = 1e-12;

const REAL_SNAP: f64 = 1e-12;

/// Which sides of the unit circle a system's roots occupy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootPattern {
    /// No poles or zeros at all: a pure gain.
    Trivial,
    /// Every pole stable and every zero minimum-phase.
    MinimumPhaseStable,
    /// Every pole unstable and every zero maximum-phase.
    MaximumPhaseUnstable,
    /// Roots on both sides of the unit circle.
    Mixed,
}

/// Factored transfer function
///
/// ```text
/// H(z) = g · Π(1 - β z⁻¹) Π(1 - δ z⁻¹) / (Π(1 - α z⁻¹) Π(1 - γ z⁻¹))
/// ```
///
/// with stable poles `α`, unstable poles `γ`, minimum-phase zeros `β` and
/// maximum-phase zeros `δ`. Construction partitions the roots by magnitude and
/// enforces that no root sits on the unit circle, that complex roots come in
/// conjugate pairs and that poles (resp. zeros) are pairwise distinct.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroPoleGain {
    stable_poles: Vec<Complex64>,
    unstable_poles: Vec<Complex64>,
    min_zeros: Vec<Complex64>,
    max_zeros: Vec<Complex64>,
    gain: f64,
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
}

fn normalize_roots(roots: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(roots.len());
    for &r in roots {
        if !(r.re.is_finite() && r.im.is_finite()) {
            return Err(Error::InvalidArgument("roots must be finite"));
        }
        if r.norm() <= ORIGIN_TOL {
            continue;
        }
        if libm::fabs(r.norm() - 1.0) <= UNIT_CIRCLE_TOL {
            return Err(Error::unit_circle(r));
        }
        let snapped = if libm::fabs(r.im) <= REAL_SNAP * r.norm().max(1.0) {
            Complex64::new(r.re, 0.0)
        } else {
            r
        };
        out.push(snapped);
    }
    check_conjugates(&out)?;
    check_simple(&out)?;
    Ok(out)
}

fn check_conjugates(roots: &[Complex64]) -> Result<()> {
    let mut used = alloc::vec![false; roots.len()];
    for (i, r) in roots.iter().enumerate() {
        if r.im == 0.0 || used[i] {
            continue;
        }
        let partner = roots
            .iter()
            .enumerate()
            .position(|(j, s)| j != i && !used[j] && close(*s, r.conj(), MULTIPLICITY_TOL));
        match partner {
            Some(j) => {
                used[i] = true;
                used[j] = true;
            }
            None => return Err(Error::MissingConjugate { re: r.re, im: r.im }),
        }
    }
    Ok(())
}

fn check_simple(roots: &[Complex64]) -> Result<()> {
    for (i, a) in roots.iter().enumerate() {
        if roots[i + 1..]
            .iter()
            .any(|b| close(*a, *b, MULTIPLICITY_TOL))
        {
            return Err(Error::non_simple(*a));
        }
    }
    Ok(())
}

/// Coefficients of `Π(1 - ρ x)` in ascending powers of `x`.
fn expand(roots: &[Complex64]) -> Vec<f64> {
    let mut coeffs = alloc::vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = alloc::vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k] += c;
            next[k + 1] -= c * r;
        }
        coeffs = next;
    }
    coeffs.into_iter().map(|c| c.re).collect()
}

impl ZeroPoleGain {
    /// Builds a system from unpartitioned pole and zero lists.
    pub fn new(poles: &[Complex64], zeros: &[Complex64], gain: f64) -> Result<Self> {
        if !gain.is_finite() || gain == 0.0 {
            return Err(Error::NotInvertible);
        }
        let poles = normalize_roots(poles)?;
        let zeros = normalize_roots(zeros)?;
        let (stable_poles, unstable_poles) = poles.into_iter().partition(|r| r.norm() < 1.0);
        let (min_zeros, max_zeros) = zeros.into_iter().partition(|r| r.norm() < 1.0);
        Ok(Self {
            stable_poles,
            unstable_poles,
            min_zeros,
            max_zeros,
            gain,
        })
    }

    /// Convenience constructor for real roots.
    pub fn from_real(poles: &[f64], zeros: &[f64], gain: f64) -> Result<Self> {
        let p: Vec<Complex64> = poles.iter().map(|&r| Complex64::new(r, 0.0)).collect();
        let z: Vec<Complex64> = zeros.iter().map(|&r| Complex64::new(r, 0.0)).collect();
        Self::new(&p, &z, gain)
    }

    /// A system with no dynamics, `H(z) = gain`.
    pub fn gain_only(gain: f64) -> Result<Self> {
        Self::new(&[], &[], gain)
    }

    pub fn stable_poles(&self) -> &[Complex64] {
        &self.stable_poles
    }

    pub fn unstable_poles(&self) -> &[Complex64] {
        &self.unstable_poles
    }

    pub fn min_zeros(&self) -> &[Complex64] {
        &self.min_zeros
    }

    pub fn max_zeros(&self) -> &[Complex64] {
        &self.max_zeros
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    pub fn poles(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.stable_poles
            .iter()
            .chain(&self.unstable_poles)
            .copied()
    }

    pub fn zeros(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.min_zeros.iter().chain(&self.max_zeros).copied()
    }

    pub fn root_count(&self) -> usize {
        self.stable_poles.len()
            + self.unstable_poles.len()
            + self.min_zeros.len()
            + self.max_zeros.len()
    }

    pub fn pattern(&self) -> RootPattern {
        let inside = !self.stable_poles.is_empty() || !self.min_zeros.is_empty();
        let outside = !self.unstable_poles.is_empty() || !self.max_zeros.is_empty();
        match (inside, outside) {
            (false, false) => RootPattern::Trivial,
            (true, false) => RootPattern::MinimumPhaseStable,
            (false, true) => RootPattern::MaximumPhaseUnstable,
            (true, true) => RootPattern::Mixed,
        }
    }

    /// Largest root magnitude after folding every root inside the unit circle.
    pub fn folded_radius(&self) -> f64 {
        let inside = self
            .stable_poles
            .iter()
            .chain(&self.min_zeros)
            .map(|r| r.norm());
        let outside = self
            .unstable_poles
            .iter()
            .chain(&self.max_zeros)
            .map(|r| 1.0 / r.norm());
        inside.chain(outside).fold(0.0, f64::max)
    }

    /// Reflects `root` (and its conjugate partner) through the unit circle,
    /// `ρ → 1/ρ̄`. The gain is kept, so only the zeroth cepstral coefficient
    /// of the result differs from a true all-pass equivalent.
    pub fn reflect(&self, root: Complex64) -> Result<Self> {
        let reflect_list = |list: Vec<Complex64>| -> Vec<Complex64> {
            list.into_iter()
                .map(|r| {
                    if close(r, root, MULTIPLICITY_TOL) || close(r, root.conj(), MULTIPLICITY_TOL) {
                        Complex64::new(1.0, 0.0) / r.conj()
                    } else {
                        r
                    }
                })
                .collect()
        };
        let poles = reflect_list(self.poles().collect());
        let zeros = reflect_list(self.zeros().collect());
        Self::new(&poles, &zeros, self.gain)
    }

    /// Evaluates `H(e^{iω})` on `grid`; every `ω` must lie in `[0, 2π]`.
    pub fn frequency_response(&self, grid: &[f64]) -> Result<Vec<Complex64>> {
        if grid.iter().any(|w| !(0.0..=2.0 * PI).contains(w)) {
            return Err(Error::InvalidArgument("frequency grid must lie in [0, 2π]"));
        }
        Ok(grid.iter().map(|&w| self.eval(w)).collect())
    }

    /// `H(e^{iω_m})` on the uniform grid `ω_m = 2πm/len`.
    pub fn response_on_grid(&self, len: usize) -> Vec<Complex64> {
        (0..len)
            .map(|m| self.eval(2.0 * PI * m as f64 / len as f64))
            .collect()
    }

    fn eval(&self, w: f64) -> Complex64 {
        let (s, c) = libm::sincos(-w);
        let zinv = Complex64::new(c, s);
        let one = Complex64::new(1.0, 0.0);
        let num = self.zeros().fold(one, |acc, r| acc * (one - r * zinv));
        let den = self.poles().fold(one, |acc, r| acc * (one - r * zinv));
        num / den * self.gain
    }

    /// Controllable canonical realization of order `max(#poles, #zeros)`.
    pub fn to_state_space(&self) -> Result<StateSpaceModel> {
        let poles: Vec<Complex64> = self.poles().collect();
        let zeros: Vec<Complex64> = self.zeros().collect();
        let n = poles.len().max(zeros.len());
        let mut den = expand(&poles);
        let mut num: Vec<f64> = expand(&zeros).into_iter().map(|c| c * self.gain).collect();
        den.resize(n + 1, 0.0);
        num.resize(n + 1, 0.0);

        let d = num[0];
        let mut a = DMatrix::zeros(n, n);
        for k in 0..n {
            a[(0, k)] = -den[k + 1];
            if k + 1 < n {
                a[(k + 1, k)] = 1.0;
            }
        }
        let mut b = DVector::zeros(n);
        if n > 0 {
            b[0] = 1.0;
        }
        let c = RowDVector::from_iterator(n, (0..n).map(|k| num[k + 1] - d * den[k + 1]));
        StateSpaceModel::new(a, b, c, d)
    }

    /// Filters `input` with the stable, possibly noncausal, impulse response
    /// of `H`, starting from rest at both ends.
    ///
    /// The factors with stable poles and minimum-phase zeros run forward in
    /// time. The rest, `Π(1 - δz⁻¹)/Π(1 - γz⁻¹)`, equals
    /// `z^{-(q-p)} Π(-δ)/Π(-γ) · Π(1 - δ⁻¹z)/Π(1 - γ⁻¹z)` with `q` such zeros
    /// and `p` such poles, and the last factor is causal in reversed time.
    pub fn filter_two_sided(&self, input: &Signal) -> Result<Signal> {
        let causal = Self {
            stable_poles: self.stable_poles.clone(),
            unstable_poles: Vec::new(),
            min_zeros: self.min_zeros.clone(),
            max_zeros: Vec::new(),
            gain: self.gain,
        };
        let ss = causal.to_state_space()?;
        let forward = ss.simulate(input, &alloc::vec![0.0; ss.order()])?;
        if self.unstable_poles.is_empty() && self.max_zeros.is_empty() {
            return Ok(forward);
        }
        let inv = |v: &[Complex64]| v.iter().map(|r| r.inv()).collect::<Vec<_>>();
        let neg_prod = |v: &[Complex64]| {
            v.iter()
                .fold(Complex64::new(1.0, 0.0), |acc, r| acc * -r)
                .re
        };
        let reversed = Self::new(
            &inv(&self.unstable_poles),
            &inv(&self.max_zeros),
            neg_prod(&self.max_zeros) / neg_prod(&self.unstable_poles),
        )?;
        let ss = reversed.to_state_space()?;
        let mut x: Vec<f64> = forward.into_samples();
        x.reverse();
        let mut y = ss
            .simulate(
                &Signal::new(x, input.sample_period())?,
                &alloc::vec![0.0; ss.order()],
            )?
            .into_samples();
        y.reverse();
        let n = y.len();
        let shift = self.max_zeros.len() as isize - self.unstable_poles.len() as isize;
        let shifted = (0..n as isize)
            .map(|k| {
                let src = k - shift;
                if (0..n as isize).contains(&src) {
                    y[src as usize]
                } else {
                    0.0
                }
            })
            .collect();
        Signal::new(shifted, input.sample_period())
    }
}
