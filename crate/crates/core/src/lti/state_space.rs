use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, RowDVector};
use num_complex::Complex64;

use super::{Signal, ZeroPoleGain};
use crate::error::{Error, Result};

/// `|D|` at or below this makes a model non-invertible.
pub const INVERTIBILITY_TOL: f64 = 1e-12;

// Eigenvalues of defective (nilpotent) blocks carry errors of order
// eps^(1/m), so the origin test for computed roots is much looser than
// `ORIGIN_TOL`.
const EIGEN_ORIGIN_TOL: f64 = 1e-6;

/// Discrete-time SISO state-space model
///
/// ```text
/// x(k+1) = A x(k) + B u(k)
/// y(k)   = C x(k) + D u(k)
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpaceModel {
    a: DMatrix<f64>,
    b: DVector<f64>,
    c: RowDVector<f64>,
    d: f64,
}

impl StateSpaceModel {
    pub fn new(a: DMatrix<f64>, b: DVector<f64>, c: RowDVector<f64>, d: f64) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::DimensionMismatch {
                what: "A columns",
                expected: n,
                found: a.ncols(),
            });
        }
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                what: "B rows",
                expected: n,
                found: b.len(),
            });
        }
        if c.len() != n {
            return Err(Error::DimensionMismatch {
                what: "C columns",
                expected: n,
                found: c.len(),
            });
        }
        let all = a
            .iter()
            .chain(b.iter())
            .chain(c.iter())
            .chain(core::iter::once(&d));
        if let Some(index) = all.clone().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { a, b, c, d })
    }

    /// Builds a model from a row-major `A` and plain slices.
    pub fn from_slices(a_row_major: &[f64], b: &[f64], c: &[f64], d: f64) -> Result<Self> {
        let n = b.len();
        if a_row_major.len() != n * n {
            return Err(Error::DimensionMismatch {
                what: "A entries",
                expected: n * n,
                found: a_row_major.len(),
            });
        }
        Self::new(
            DMatrix::from_row_slice(n, n, a_row_major),
            DVector::from_column_slice(b),
            RowDVector::from_row_slice(c),
            d,
        )
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &DVector<f64> {
        &self.b
    }

    pub fn c(&self) -> &RowDVector<f64> {
        &self.c
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    /// State dimension `n`.
    pub fn order(&self) -> usize {
        self.a.nrows()
    }

    pub fn is_invertible(&self) -> bool {
        libm::fabs(self.d) > INVERTIBILITY_TOL
    }

    /// Runs the state recursion from `x0`; the output has the input's length
    /// and sample period. Divergence to non-finite values is reported rather
    /// than returned.
    pub fn simulate(&self, input: &Signal, x0: &[f64]) -> Result<Signal> {
        let n = self.order();
        if x0.len() != n {
            return Err(Error::DimensionMismatch {
                what: "initial state",
                expected: n,
                found: x0.len(),
            });
        }
        let mut x = DVector::from_column_slice(x0);
        let mut next = DVector::zeros(n);
        let mut out = Vec::with_capacity(input.len());
        for (k, &u) in input.samples().iter().enumerate() {
            let y = self.c.dot(&x.transpose()) + self.d * u;
            if !y.is_finite() {
                return Err(Error::NonFinite { index: k });
            }
            out.push(y);
            next.gemv(1.0, &self.a, &x, 0.0);
            next.axpy(u, &self.b, 1.0);
            core::mem::swap(&mut x, &mut next);
        }
        Signal::new(out, input.sample_period())
    }

    /// The inverse system `(A - BD⁻¹C, BD⁻¹, -D⁻¹C, D⁻¹)`.
    pub fn invert(&self) -> Result<Self> {
        if !self.is_invertible() {
            return Err(Error::NotInvertible);
        }
        let dinv = 1.0 / self.d;
        Ok(Self {
            a: self.inverse_dynamics(),
            b: &self.b * dinv,
            c: &self.c * -dinv,
            d: dinv,
        })
    }

    /// `A - BD⁻¹C`, whose eigenvalues are the zeros.
    fn inverse_dynamics(&self) -> DMatrix<f64> {
        &self.a - &self.b * &self.c / self.d
    }

    /// Eigenvalues of `A`.
    pub fn poles(&self) -> Vec<Complex64> {
        eigenvalues(&self.a)
    }

    /// Eigenvalues of `A - BD⁻¹C`.
    pub fn zeros(&self) -> Result<Vec<Complex64>> {
        if !self.is_invertible() {
            return Err(Error::NotInvertible);
        }
        Ok(eigenvalues(&self.inverse_dynamics()))
    }

    /// True when every pole and zero lies strictly inside the unit circle.
    pub fn is_minimum_phase_stable(&self) -> Result<bool> {
        let limit = 1.0 - super::UNIT_CIRCLE_TOL;
        Ok(self
            .poles()
            .iter()
            .chain(&self.zeros()?)
            .all(|r| r.norm() < limit))
    }

    /// `D + C (zI - A)⁻¹ B` at `z = e^{iω}` for each `ω` in `grid`.
    pub fn frequency_response(&self, grid: &[f64]) -> Result<Vec<Complex64>> {
        let n = self.order();
        let a = self.a.map(|v| Complex64::new(v, 0.0));
        let b = self.b.map(|v| Complex64::new(v, 0.0));
        let c = self.c.map(|v| Complex64::new(v, 0.0));
        grid.iter()
            .map(|&w| {
                let (s, cs) = libm::sincos(w);
                let z = Complex64::new(cs, s);
                if n == 0 {
                    return Ok(Complex64::new(self.d, 0.0));
                }
                let m = DMatrix::<Complex64>::identity(n, n) * z - &a;
                let x = m
                    .lu()
                    .solve(&b)
                    .ok_or(Error::InvalidArgument("frequency lies on a pole"))?;
                Ok((&c * x)[(0, 0)] + self.d)
            })
            .collect()
    }

    /// Poles and zeros from the eigenvalues of `A` and `A - BD⁻¹C`.
    pub fn to_zpk(&self) -> Result<ZeroPoleGain> {
        let zeros = self.zeros()?;
        let drop_origin = |v: Vec<Complex64>| -> Vec<Complex64> {
            v.into_iter()
                .filter(|r| r.norm() > EIGEN_ORIGIN_TOL)
                .collect()
        };
        ZeroPoleGain::new(&drop_origin(self.poles()), &drop_origin(zeros), self.d)
    }
}

/// Same as [`StateSpaceModel::to_zpk`].
pub fn roots_from_state_space(model: &StateSpaceModel) -> Result<ZeroPoleGain> {
    model.to_zpk()
}

fn eigenvalues(m: &DMatrix<f64>) -> Vec<Complex64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    m.clone().complex_eigenvalues().iter().copied().collect()
}
