//! Dense helpers shared by the subspace routines.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Columns whose smallest-to-largest singular value ratio falls below this
/// are treated as rank deficient.
pub const RANK_TOL: f64 = 1e-10;

/// Ratio of the smallest to the largest singular value; 0 for an empty or
/// all-zero matrix.
pub fn condition_ratio(m: &DMatrix<f64>) -> f64 {
    if m.ncols() == 0 || m.nrows() == 0 {
        return 0.0;
    }
    let s = m.clone().singular_values();
    let max = s.max();
    if max == 0.0 {
        return 0.0;
    }
    s.min() / max
}

/// Orthonormal basis of the column space of a full-column-rank matrix.
pub fn orthonormal_columns(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if m.ncols() > m.nrows() {
        return Err(Error::RankDeficient { ratio: 0.0 });
    }
    let ratio = condition_ratio(m);
    if ratio <= RANK_TOL {
        return Err(Error::RankDeficient { ratio });
    }
    Ok(m.clone().qr().q())
}

/// Left singular vectors spanning the dominant column space of `m`.
///
/// With `order` given exactly that many directions are kept; otherwise the
/// rank is the number of singular values above `rel_tol · σ_max`.
pub fn dominant_column_space(
    m: &DMatrix<f64>,
    rel_tol: f64,
    order: Option<usize>,
) -> Result<DMatrix<f64>> {
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let mut idx: alloc::vec::Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let max = idx.first().map_or(0.0, |&i| svd.singular_values[i]);
    let rank = match order {
        Some(r) if r > idx.len() => {
            return Err(Error::DimensionMismatch {
                what: "requested order",
                expected: idx.len(),
                found: r,
            })
        }
        Some(r) => r,
        None => idx
            .iter()
            .filter(|&&i| svd.singular_values[i] > rel_tol * max)
            .count(),
    };
    Ok(DMatrix::from_fn(m.nrows(), rank, |r, c| u[(r, idx[c])]))
}
