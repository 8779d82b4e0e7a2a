//! Brute-force scan of every integer matrix in an entry box.

use nalgebra::DMatrix;

use super::ball::{BallSpec, BasePoints};
use super::identity::isqrt;
use super::matrix::det_i64;
use super::{budget_of, ExactLatError};

/// Largest box the scan will attempt, in matrices.
const MAX_CELLS: f64 = 5e8;

pub(crate) fn count(spec: &BallSpec, tol: f64) -> Result<(u64, u64), ExactLatError> {
    let n = spec.n();
    match spec.base() {
        BasePoints::Identity => {
            let budget = budget_of(spec)?;
            let b = isqrt(budget);
            check_box(n, b)?;
            let mut c = 0u64;
            scan(n, b, |m| {
                if m.iter().map(|x| x * x).sum::<i64>() <= budget && det_i64(n, m) == 1 {
                    c += 1;
                }
            });
            Ok((c, 0))
        }
        BasePoints::General { z, w } => {
            let zi = z.as_nalgebra().try_inverse().ok_or(ExactLatError::NotPositiveDefinite)?;
            let wm = w.as_nalgebra();
            let t2 = spec.radius_sq().to_f64();
            // ‖z⁻¹Mw‖ ≥ σ_min(z⁻¹) σ_min(w) ‖M‖
            let smin = |a: &DMatrix<f64>| a.singular_values().min();
            let scale = smin(&zi) * smin(&wm);
            if !(scale > 0.0) {
                return Err(ExactLatError::NotPositiveDefinite);
            }
            let bound = t2 * (1.0 + tol);
            let b = ((bound / (scale * scale)).sqrt() * (1.0 + 1e-12)).floor() as i64;
            check_box(n, b)?;
            let (mut c, mut border) = (0u64, 0u64);
            scan(n, b, |m| {
                if det_i64(n, m) != 1 {
                    return;
                }
                let mm = DMatrix::from_row_slice(n, n, &m.iter().map(|&x| x as f64).collect::<Vec<_>>());
                let v = (&zi * mm * &wm).norm_squared();
                if v < bound || v <= t2 {
                    c += 1;
                    if (v - t2).abs() < tol * t2 {
                        border += 1;
                    }
                }
            });
            Ok((c, border))
        }
    }
}

fn check_box(n: usize, b: i64) -> Result<(), ExactLatError> {
    let cells = ((2 * b + 1) as f64).powi((n * n) as i32);
    if cells > MAX_CELLS {
        return Err(ExactLatError::RadiusTooLarge(format!("naive scan of {cells:.3e} matrices")));
    }
    Ok(())
}

/// Calls `f` on every row-major matrix with entries in `[-b, b]`.
fn scan<F: FnMut(&[i64])>(n: usize, b: i64, mut f: F) {
    let mut m = vec![-b; n * n];
    loop {
        f(&m);
        let mut i = 0;
        loop {
            if i == m.len() {
                return;
            }
            if m[i] < b {
                m[i] += 1;
                break;
            }
            m[i] = -b;
            i += 1;
        }
    }
}
