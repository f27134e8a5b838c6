//! Transforms between a coefficient vector and its values at all `p`-th
//! roots of unity, for arbitrary (in practice prime) lengths `p`.
//!
//! rustfft supplies the underlying mixed-radix/Bluestein machinery, so a
//! prime length costs the same `O(p log p)` as a smooth one. Both directions
//! here are exact inverses of each other: `(1/sqrt(p)) V(omega^-1)` is
//! unitary, which is what makes the approximate-remainder error bound go
//! through.

use num_complex::Complex64;
use rustfft::FftPlanner;

/// `w_j = sum_i v_i omega^{ij}` with `omega = e^(2 pi i / p)`, `p = v.len()`:
/// the values of the polynomial with coefficients `v` at all `p`-th roots of
/// unity (the Vandermonde product `V(omega) v`).
pub fn values_at_unit_roots(mut v: Vec<Complex64>) -> Vec<Complex64> {
    FftPlanner::new().plan_fft_inverse(v.len()).process(&mut v);
    v
}

/// Inverse of [`values_at_unit_roots`]: recover the coefficient vector as
/// `(1/p) V(omega^-1) w` from values at all `p`-th roots of unity.
pub fn coeffs_from_unit_values(mut w: Vec<Complex64>) -> Vec<Complex64> {
    let p = w.len();
    FftPlanner::new().plan_fft_forward(p).process(&mut w);
    let scale = 1.0 / p as f64;
    for x in &mut w {
        *x *= scale;
    }
    w
}
