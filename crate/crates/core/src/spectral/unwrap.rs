use alloc::vec::Vec;
use core::f64::consts::PI;

/// Greedy phase unwrapping.
///
/// Each successive difference is shifted by a multiple of `2π` into
/// `(-π, π]`; the first value is kept as is.
pub fn unwrap_phase(principal: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(principal.len());
    let mut offset = 0.0;
    for (k, &p) in principal.iter().enumerate() {
        if k > 0 {
            let d = p - principal[k - 1];
            let wrapped = d - 2.0 * PI * libm::ceil((d - PI) / (2.0 * PI));
            offset += wrapped - d;
        }
        out.push(p + offset);
    }
    out
}
