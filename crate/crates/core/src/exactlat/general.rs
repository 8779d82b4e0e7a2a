//! Enumeration under the quadratic form `vec(M) ↦ ‖z⁻¹Mw‖²_F` for real base
//! points.

use std::ops::Range;

use nalgebra::DMatrix;

use super::ball::{BallSpec, BasePoints, RealMatrix};
use super::lattice::Cholesky;
use super::matrix::{det_i64, IntegerMatrix};
use super::ExactLatError;

/// `(zzᵀ)⁻¹`, checked positive definite.
pub(crate) fn inverse_gram(z: &RealMatrix) -> Result<DMatrix<f64>, ExactLatError> {
    let zm = z.as_nalgebra();
    let q = (&zm * zm.transpose())
        .try_inverse()
        .ok_or(ExactLatError::NotPositiveDefinite)?;
    let q = (&q + q.transpose()) * 0.5;
    if !q.iter().all(|x| x.is_finite()) || q.clone().cholesky().is_none() {
        return Err(ExactLatError::NotPositiveDefinite);
    }
    Ok(q)
}

pub(crate) struct Form {
    n: usize,
    gram: Vec<f64>,
    chol: Cholesky,
    t2: f64,
    tol: f64,
    top_lo: i64,
    top_hi: i64,
}

impl Form {
    pub fn new(spec: &BallSpec, tol: f64) -> Result<Self, ExactLatError> {
        let n = spec.n();
        let (q, p) = match spec.base() {
            BasePoints::Identity => (DMatrix::identity(n, n), DMatrix::identity(n, n)),
            BasePoints::General { z, w } => {
                let wm = w.as_nalgebra();
                (inverse_gram(z)?, &wm * wm.transpose())
            }
        };
        // vec is row-major: index (i, j) ↦ i·n + j, and
        // ‖z⁻¹Mw‖² = Σ M_ij M_kl Q_ik P_jl.
        let q = q.kronecker(&p);
        let m = n * n;
        let gram: Vec<f64> = (0..m * m).map(|k| q[(k / m, k % m)]).collect();
        let chol = Cholesky::new(&gram, m).ok_or(ExactLatError::NotPositiveDefinite)?;
        let t2 = spec.radius_sq().to_f64();
        if !t2.is_finite() {
            return Err(ExactLatError::RadiusTooLarge(spec.radius_sq().to_string()));
        }
        let center = vec![0.0; m];
        let top = chol
            .top_range(&center, t2 * (1.0 + tol))
            .ok_or(ExactLatError::NotPositiveDefinite)?;
        Ok(Self {
            n,
            gram,
            chol,
            t2,
            tol,
            top_lo: *top.start(),
            top_hi: *top.end() + 1,
        })
    }

    pub fn top_len(&self) -> usize {
        (self.top_hi - self.top_lo).max(0) as usize
    }

    /// `k` contiguous half-open ranges of the outermost coordinate.
    pub fn top_units(&self, k: usize) -> Vec<(i64, i64)> {
        super::split_even(self.top_lo, self.top_hi, k.max(1))
    }

    fn value(&self, y: &[i64]) -> f64 {
        let m = y.len();
        let mut s = 0.0;
        for i in 0..m {
            if y[i] == 0 {
                continue;
            }
            let mut row = 0.0;
            for j in 0..m {
                row += self.gram[i * m + j] * y[j] as f64;
            }
            s += y[i] as f64 * row;
        }
        s
    }

    fn visit<F: FnMut(&[i64], bool)>(&self, range: Range<i64>, mut f: F) {
        if range.start >= range.end {
            return;
        }
        let m = self.n * self.n;
        let center = vec![0.0; m];
        let bound = self.t2 * (1.0 + self.tol);
        let margin = self.tol * self.t2;
        self.chol
            .enumerate(&center, bound, Some(range.start..=range.end - 1), |y| {
                if det_i64(self.n, y) != 1 {
                    return;
                }
                let v = self.value(y);
                if v < bound || v <= self.t2 {
                    f(y, (v - self.t2).abs() < margin);
                }
            });
    }

    /// `(count, borderline)` over candidates whose outermost coordinate is in `range`.
    pub fn count_range(&self, range: Range<i64>) -> (u64, u64) {
        let (mut c, mut b) = (0u64, 0u64);
        self.visit(range, |_, border| {
            c += 1;
            b += border as u64;
        });
        (c, b)
    }

    pub fn enumerate(&self) -> Vec<IntegerMatrix> {
        let mut out = Vec::new();
        self.visit(self.top_lo..self.top_hi, |y, _| out.push(IntegerMatrix::from_i64_flat(self.n, y)));
        out
    }
}
