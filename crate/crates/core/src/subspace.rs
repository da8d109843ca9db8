//! Hankel matrices, observability ranges and principal angles.
//!
//! The subspace-angle norm of a model is `-log Π cos²θᵢ` over the principal
//! angles between the ranges of the observability matrices of the model and
//! of its inverse. The ranges come either from the roots (Vandermonde
//! matrices), from input/output data (Hankel projections) or from frequency
//! response samples (Hankel matrices of Markov parameters).

use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::ifft;
use crate::linalg::{condition_ratio, dominant_column_space, orthonormal_columns, RANK_TOL};
use crate::lti::{RootPattern, Signal, ZeroPoleGain, MULTIPLICITY_TOL, ORIGIN_TOL};
use crate::metrics::cascade;
use crate::phase::{classify, ClassifierConfig, PhaseKind};
use crate::spectral::{complex_cepstrum_from_response, unwrap_phase};

/// Default truncation `j` of the infinite observability matrices.
pub const DEFAULT_TRUNCATION: usize = 400;
/// Largest accepted change of the model norm between `j` and `2j`.
pub const CONVERGENCE_TOL: f64 = 1e-10;
/// Default block rows `i` for data and response Hankel matrices.
pub const DEFAULT_BLOCK_ROWS: usize = 128;
/// Relative singular-value cut-off for the numerical order of estimated
/// observability ranges.
pub const DEFAULT_ORDER_TOL: f64 = 1e-8;

/// `i×j` Hankel matrix `H(a, b) = y(a + b) / √j`.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelMatrix {
    entries: DMatrix<f64>,
}

impl HankelMatrix {
    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<f64> {
        self.entries
    }

    pub fn rows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn columns(&self) -> usize {
        self.entries.ncols()
    }
}

pub fn build_hankel(y: &Signal, rows: usize, columns: usize) -> Result<HankelMatrix> {
    if rows == 0 || columns == 0 {
        return Err(Error::InvalidArgument("Hankel dimensions must be positive"));
    }
    let needed = rows + columns - 1;
    if needed > y.len() {
        return Err(Error::InsufficientData {
            needed,
            available: y.len(),
        });
    }
    if rows > columns {
        log::warn!("Hankel matrix has more rows ({rows}) than columns ({columns})");
    }
    let x = y.samples();
    let scale = 1.0 / libm::sqrt(columns as f64);
    Ok(HankelMatrix {
        entries: DMatrix::from_fn(rows, columns, |a, b| x[a + b] * scale),
    })
}

/// `Y - U(UᵀU)⁻¹UᵀY`, computed with an orthonormal basis of `U` and one
/// reorthogonalization pass.
pub fn project_complement(y: &DMatrix<f64>, u: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if y.nrows() != u.nrows() {
        return Err(Error::DimensionMismatch {
            what: "projection rows",
            expected: u.nrows(),
            found: y.nrows(),
        });
    }
    let q = orthonormal_columns(u)?;
    let qt = q.transpose();
    let mut r = y - &q * (&qt * y);
    r -= &q * (&qt * &r);
    Ok(r)
}

/// Real `j`-row basis of the Vandermonde range `(1, ρ, ρ², …, ρ^{j-1})` of
/// each root. A conjugate pair contributes the real and imaginary parts of
/// one of its columns, which span the same plane.
pub fn vandermonde_range(roots: &[Complex64], rows: usize) -> Result<DMatrix<f64>> {
    if rows < roots.len() {
        return Err(Error::DimensionMismatch {
            what: "Vandermonde rows",
            expected: roots.len(),
            found: rows,
        });
    }
    for (i, a) in roots.iter().enumerate() {
        if roots[i + 1..]
            .iter()
            .any(|b| (a - b).norm() <= MULTIPLICITY_TOL * a.norm().max(1.0))
        {
            return Err(Error::NonSimpleRoot { re: a.re, im: a.im });
        }
    }
    let upper = roots.iter().filter(|r| r.im > 0.0).count();
    let lower = roots.iter().filter(|r| r.im < 0.0).count();
    if upper != lower {
        let r = roots
            .iter()
            .find(|r| r.im != 0.0)
            .expect("unpaired root exists");
        return Err(Error::MissingConjugate { re: r.re, im: r.im });
    }
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(roots.len());
    for r in roots.iter().filter(|r| r.im >= 0.0) {
        let mut re = Vec::with_capacity(rows);
        let mut im = Vec::with_capacity(rows);
        let mut pw = Complex64::new(1.0, 0.0);
        for _ in 0..rows {
            re.push(pw.re);
            im.push(pw.im);
            pw *= r;
        }
        columns.push(re);
        if r.im > 0.0 {
            columns.push(im);
        }
    }
    Ok(DMatrix::from_fn(rows, columns.len(), |a, b| columns[b][a]))
}

/// Principal angles between two column spaces, smallest first.
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalAngleSet {
    cos2: Vec<f64>,
}

impl PrincipalAngleSet {
    /// `cos²θᵢ`, nonincreasing.
    pub fn cos2(&self) -> &[f64] {
        &self.cos2
    }

    /// `θᵢ ∈ [0, π/2]`, nondecreasing.
    pub fn angles(&self) -> Vec<f64> {
        self.cos2
            .iter()
            .map(|c| libm::acos(libm::sqrt(*c)))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.cos2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cos2.is_empty()
    }

    /// `-log Π cos²θᵢ`.
    pub fn log_norm(&self) -> f64 {
        -self.cos2.iter().map(|c| libm::log(*c)).sum::<f64>()
    }
}

fn check_rows(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<()> {
    if a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch {
            what: "subspace rows",
            expected: a.nrows(),
            found: b.nrows(),
        });
    }
    Ok(())
}

/// Principal angles from the singular values of `Q_aᵀ Q_b`, with `Q_a`, `Q_b`
/// orthonormal bases of the two column spaces.
pub fn principal_angles(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<PrincipalAngleSet> {
    check_rows(a, b)?;
    let qa = orthonormal_columns(a)?;
    let qb = orthonormal_columns(b)?;
    let mut cos2: Vec<f64> = (qa.transpose() * qb)
        .singular_values()
        .iter()
        .map(|s| s.clamp(0.0, 1.0).powi(2))
        .collect();
    cos2.sort_by(|x, y| y.total_cmp(x));
    Ok(PrincipalAngleSet { cos2 })
}

/// `cos²θᵢ` as the largest eigenvalues of `(AᵀA)⁻¹AᵀB(BᵀB)⁻¹BᵀA`,
/// nonincreasing. Less accurate than [`principal_angles`]; kept as a check.
pub fn principal_angles_eig(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<Vec<f64>> {
    check_rows(a, b)?;
    for m in [a, b] {
        let ratio = condition_ratio(m);
        if ratio <= RANK_TOL || m.ncols() > m.nrows() {
            return Err(Error::RankDeficient { ratio });
        }
    }
    let (at, bt) = (a.transpose(), b.transpose());
    let ata = (&at * a)
        .try_inverse()
        .ok_or(Error::RankDeficient { ratio: 0.0 })?;
    let btb = (&bt * b)
        .try_inverse()
        .ok_or(Error::RankDeficient { ratio: 0.0 })?;
    let m = ata * &at * b * btb * bt * a;
    let mut ev: Vec<f64> = m.complex_eigenvalues().iter().map(|z| z.re).collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    ev.truncate(a.ncols().min(b.ncols()));
    Ok(ev)
}

/// Basis for the observability range of a system of order `n` whose
/// (folded) roots are `roots`: the Vandermonde columns of the roots away
/// from the origin, completed by `e₁, e₂, …` for the roots at the origin.
fn observability_basis(roots: &[Complex64], order: usize, rows: usize) -> Result<DMatrix<f64>> {
    let away: Vec<Complex64> = roots
        .iter()
        .copied()
        .filter(|r| r.norm() > ORIGIN_TOL)
        .collect();
    let v = vandermonde_range(&away, rows)?;
    let origin = order - away.len();
    if origin > rows - v.ncols() {
        return Err(Error::DimensionMismatch {
            what: "observability rows",
            expected: order,
            found: rows,
        });
    }
    let mut basis = DMatrix::zeros(rows, order);
    basis.columns_mut(0, v.ncols()).copy_from(&v);
    for k in 0..origin {
        basis[(k, v.ncols() + k)] = 1.0;
    }
    Ok(basis)
}

fn model_norm_at(poles: &[Complex64], zeros: &[Complex64], rows: usize) -> Result<f64> {
    let order = poles.len().max(zeros.len());
    if order == 0 {
        return Ok(0.0);
    }
    let gamma = observability_basis(poles, order, rows)?;
    let gamma_inv = observability_basis(zeros, order, rows)?;
    Ok(principal_angles(&gamma, &gamma_inv)?.log_norm())
}

/// Subspace-angle norm `-log Π cos²θᵢ` of a stable minimum-phase or unstable
/// maximum-phase model from its roots, inverted into the unit disc in the
/// latter case.
///
/// A system with `p` poles and `q ≠ p` zeros has order `max(p, q)`; the
/// missing roots sit at the origin and enter the observability range as the
/// leading unit vectors. The norm is evaluated with `j` and `2j` rows and
/// the `2j` value returned once the two agree to [`CONVERGENCE_TOL`].
pub fn subspace_norm_from_model(zpk: &ZeroPoleGain, rows: usize) -> Result<f64> {
    let inv = |v: &[Complex64]| v.iter().map(|r| r.inv()).collect::<Vec<_>>();
    let (poles, zeros) = match zpk.pattern() {
        RootPattern::Trivial => return Ok(0.0),
        RootPattern::Mixed => return Err(Error::MixedPhaseUnsupported),
        RootPattern::MinimumPhaseStable => (zpk.stable_poles().to_vec(), zpk.min_zeros().to_vec()),
        RootPattern::MaximumPhaseUnstable => (inv(zpk.unstable_poles()), inv(zpk.max_zeros())),
    };
    let coarse = model_norm_at(&poles, &zeros, rows)?;
    let fine = model_norm_at(&poles, &zeros, 2 * rows)?;
    let gap = libm::fabs(fine - coarse);
    if !(gap <= CONVERGENCE_TOL) {
        return Err(Error::NotConverged { gap });
    }
    Ok(fine)
}

/// Squared subspace distance `‖H₁H₂⁻¹‖²` between two models.
pub fn subspace_distance_between_models(
    h1: &ZeroPoleGain,
    h2: &ZeroPoleGain,
    rows: usize,
) -> Result<f64> {
    subspace_norm_from_model(&cascade(h1, h2)?.system, rows)
}

/// Block sizes and order selection for the data-driven ranges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HankelConfig {
    /// Block rows `i`.
    pub rows: usize,
    /// Columns `j`; defaults to all available (`N - i + 1`, or `L/2 - i`
    /// for response data).
    pub columns: Option<usize>,
    /// Model order; estimated from the singular values when absent.
    pub order: Option<usize>,
    /// Relative singular-value threshold for the order estimate.
    pub order_tol: f64,
}

impl Default for HankelConfig {
    fn default() -> Self {
        Self {
            rows: DEFAULT_BLOCK_ROWS,
            columns: None,
            order: None,
            order_tol: DEFAULT_ORDER_TOL,
        }
    }
}

/// Estimated observability ranges of a model and of its inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservabilityRanges {
    /// Orthonormal basis of `range Γᵢ(M)`.
    pub model: DMatrix<f64>,
    /// Orthonormal basis of `range Γᵢ(M⁻¹)`.
    pub inverse: DMatrix<f64>,
}

/// Ranges from input/output data: the column spaces of `Y|U⊥` and `U|Y⊥`.
///
/// Both projections are formed from the triangular factor `R` of one QR
/// decomposition of `[Uᵀ Yᵀ]`, so only `2i×2i` matrices are projected.
pub fn observability_ranges_from_data(
    input: &Signal,
    output: &Signal,
    config: &HankelConfig,
) -> Result<ObservabilityRanges> {
    input.same_length(output)?;
    let i = config.rows;
    if i == 0 {
        return Err(Error::InvalidArgument("block rows must be positive"));
    }
    let n = input.len();
    let j = match config.columns {
        Some(j) => j,
        None => (n + 1).checked_sub(i).ok_or(Error::InsufficientData {
            needed: i,
            available: n,
        })?,
    };
    if j < 2 * i {
        return Err(Error::InsufficientData {
            needed: 3 * i - 1,
            available: n,
        });
    }
    let u = build_hankel(input, i, j)?.into_entries();
    let y = build_hankel(output, i, j)?.into_entries();
    let mut stacked = DMatrix::zeros(j, 2 * i);
    stacked.columns_mut(0, i).copy_from(&u.transpose());
    stacked.columns_mut(i, i).copy_from(&y.transpose());
    let r = stacked.qr().r();
    let ru = r.columns(0, i).into_owned();
    let ry = r.columns(i, i).into_owned();
    let py = project_complement(&ry, &ru)?;
    let pu = project_complement(&ru, &ry)?;
    Ok(ObservabilityRanges {
        model: dominant_column_space(&py.transpose(), config.order_tol, config.order)?,
        inverse: dominant_column_space(&pu.transpose(), config.order_tol, config.order)?,
    })
}

fn ranges_norm(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<f64> {
    if a.ncols() == 0 && b.ncols() == 0 {
        return Ok(0.0);
    }
    Ok(principal_angles(a, b)?.log_norm())
}

/// Data-driven subspace-angle norm of the system from `u` to `y`, which
/// must be stable and minimum-phase.
pub fn subspace_norm_from_data(
    input: &Signal,
    output: &Signal,
    config: &HankelConfig,
) -> Result<f64> {
    let r = observability_ranges_from_data(input, output, config)?;
    ranges_norm(&r.model, &r.inverse)
}

fn hstack(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
    m.columns_mut(0, a.ncols()).copy_from(a);
    m.columns_mut(a.ncols(), b.ncols()).copy_from(b);
    m
}

/// Squared data-driven subspace distance between the systems behind two
/// input/output pairs: the angles between `[Γ(M₁) Γ(M₂⁻¹)]` and
/// `[Γ(M₂) Γ(M₁⁻¹)]`.
pub fn subspace_distance_from_data(
    first: (&Signal, &Signal),
    second: (&Signal, &Signal),
    config: &HankelConfig,
) -> Result<f64> {
    let r1 = observability_ranges_from_data(first.0, first.1, config)?;
    let r2 = observability_ranges_from_data(second.0, second.1, config)?;
    subspace_distance_between_ranges(&r1, &r2)
}

/// Squared subspace distance from two sets of estimated ranges.
pub fn subspace_distance_between_ranges(
    r1: &ObservabilityRanges,
    r2: &ObservabilityRanges,
) -> Result<f64> {
    if r1.model.nrows() != r2.model.nrows() {
        return Err(Error::DimensionMismatch {
            what: "observability rows",
            expected: r1.model.nrows(),
            found: r2.model.nrows(),
        });
    }
    ranges_norm(
        &hstack(&r1.model, &r2.inverse),
        &hstack(&r2.model, &r1.inverse),
    )
}

/// Subspace-angle norm from frequency response samples on the grid
/// `2πm/L` of a stable minimum-phase or unstable maximum-phase system.
///
/// The phase type is read off the complex cepstrum. A maximum-phase
/// response is conjugated, which maps every root to its inverse, and any
/// integer delay is removed. The ranges are then the column spaces of the
/// Hankel matrices `h(a + b + 1)` of the Markov parameters of the system
/// and of its inverse.
pub fn subspace_norm_from_response(response: &[Complex64], config: &HankelConfig) -> Result<f64> {
    let l = response.len();
    let cepstrum = complex_cepstrum_from_response(response, ClassifierConfig::MODEL.k_test)?;
    let conjugate = match classify(&cepstrum, &ClassifierConfig::MODEL)?.kind {
        PhaseKind::Mixed => return Err(Error::MixedPhaseUnsupported),
        PhaseKind::MaximumPhaseUnstable => true,
        PhaseKind::MinimumPhaseStable | PhaseKind::Indeterminate => false,
    };
    let g: Vec<Complex64> = response
        .iter()
        .map(|h| if conjugate { h.conj() } else { *h })
        .collect();
    let half = l / 2;
    let phase = unwrap_phase(&g[..=half].iter().map(|x| x.arg()).collect::<Vec<_>>());
    let delay = libm::round(phase[half] / PI);
    let shift = |m: usize| {
        let (s, c) = libm::sincos(-delay * 2.0 * PI * m as f64 / l as f64);
        Complex64::new(c, s)
    };
    let mut forward: Vec<Complex64> = g.iter().enumerate().map(|(m, x)| x * shift(m)).collect();
    let mut inverse: Vec<Complex64> = forward.iter().map(|x| x.inv()).collect();
    ifft(&mut forward)?;
    ifft(&mut inverse)?;
    let i = config.rows;
    let j = config.columns.unwrap_or(half.saturating_sub(i));
    if i == 0 || j == 0 || i + j > half {
        return Err(Error::InsufficientData {
            needed: 2 * (i + j.max(1)),
            available: l,
        });
    }
    let markov = |h: &[Complex64]| DMatrix::from_fn(i, j, |a, b| h[a + b + 1].re);
    let model = dominant_column_space(&markov(&forward), config.order_tol, config.order)?;
    let inv = dominant_column_space(&markov(&inverse), config.order_tol, config.order)?;
    ranges_norm(&model, &inv)
}
