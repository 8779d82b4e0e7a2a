//! Exact enumeration and counting of `γ ∈ SL(n, Z)` with `‖z⁻¹γw‖_F ≤ T`.
//!
//! For identity base points the count is exact in integer arithmetic: rows
//! `r₁, …, r_{n−1}` are enumerated under a shrinking norm budget, and the last
//! row is counted as the points of the affine lattice `{x : x·v = 1}` (with `v` the
//! cofactor vector) inside the remaining ball. For general real base points the
//! quadratic form on `Z^{n²}` is enumerated in floating point, the determinant is
//! checked exactly, and candidates near the boundary are reported.

mod ball;
mod general;
mod identity;
mod lattice;
mod matrix;
mod naive;

use std::time::Instant;

use thiserror::Error;

pub use ball::{BallSpec, BasePoints, CountMethod, CountRecord, RadiusSq, RealMatrix};
pub use matrix::{frobenius_sq, IntegerMatrix};

use crate::Execution;

/// Default relative certification margin for general base points.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Largest supported `⌊T²⌋`; keeps every intermediate in `i64`/`i128`.
pub const MAX_BUDGET: i64 = 1 << 40;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExactLatError {
    #[error("dimension must be at least 2, got {0}")]
    Dimension(usize),
    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("radius_sq must be non-negative, got {0}")]
    NegativeRadius(String),
    #[error("radius_sq {0} exceeds the supported range")]
    RadiusTooLarge(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("base point {which} has determinant {det}, expected 1")]
    BaseDeterminant { which: &'static str, det: f64 },
    #[error("assembled quadratic form is not numerically positive definite")]
    NotPositiveDefinite,
    #[error("operation requires identity base points")]
    RequiresIdentity,
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("work unit does not belong to this spec")]
    ForeignWorkUnit,
}

/// `‖z⁻¹Mw‖²_F = tr(wᵀMᵀ(zzᵀ)⁻¹Mw)`.
pub fn twisted_norm_sq(m: &IntegerMatrix, z: &RealMatrix, w: &RealMatrix) -> Result<f64, ExactLatError> {
    let n = m.n();
    if z.n != n || w.n != n {
        return Err(ExactLatError::Shape {
            expected: n,
            got: if z.n != n { z.n } else { w.n },
        });
    }
    let q = general::inverse_gram(z)?;
    let mm = nalgebra::DMatrix::from_row_slice(n, n, &m.to_f64());
    let a = &mm * w.as_nalgebra();
    Ok((a.transpose() * q * a).trace())
}

fn budget_of(spec: &BallSpec) -> Result<i64, ExactLatError> {
    use num_traits::ToPrimitive;
    spec.radius_sq()
        .floor()
        .to_i64()
        .filter(|&b| b <= MAX_BUDGET)
        .ok_or_else(|| ExactLatError::RadiusTooLarge(spec.radius_sq().to_string()))
}

fn check_tol(tol: f64) -> Result<(), ExactLatError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(ExactLatError::InvalidTolerance(tol))
    }
}

/// Exact count for identity base points by row recursion.
pub fn count_identity_ball(spec: &BallSpec, exec: Execution) -> Result<CountRecord, ExactLatError> {
    if !spec.is_identity() {
        return Err(ExactLatError::RequiresIdentity);
    }
    let start = Instant::now();
    let search = identity::RowSearch::new(spec.n(), budget_of(spec)?);
    let count = search.count(0..search.first_rows(), exec);
    Ok(CountRecord {
        spec: spec.clone(),
        count,
        method: CountMethod::RowRecursive,
        borderline: 0,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Count under the quadratic form `vec(M) ↦ ‖z⁻¹Mw‖²` on `Z^{n²}`.
///
/// Members with value below `T²(1 + tol)` are counted; those with
/// `|value − T²| < tol·T²` are also reported in `borderline`. Identity base
/// points are accepted and treated as `z = w = id`.
pub fn count_general_ball(spec: &BallSpec, tol: f64, exec: Execution) -> Result<CountRecord, ExactLatError> {
    check_tol(tol)?;
    let start = Instant::now();
    let form = general::Form::new(spec, tol)?;
    let units = form.top_units(form.top_len());
    let (count, borderline) = crate::par::sum_pair(&units, exec, |&(s, e)| form.count_range(s..e));
    Ok(CountRecord {
        spec: spec.clone(),
        count,
        method: CountMethod::GenericForm,
        borderline,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Entry-by-entry scan; a reference oracle, only usable for tiny `n` and `T`.
pub fn naive_count(spec: &BallSpec, tol: f64) -> Result<CountRecord, ExactLatError> {
    check_tol(tol)?;
    let start = Instant::now();
    let (count, borderline) = naive::count(spec, tol)?;
    Ok(CountRecord {
        spec: spec.clone(),
        count,
        method: CountMethod::Naive,
        borderline,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Dispatches on `method`. `RowRecursive` requires identity base points.
pub fn count_ball(spec: &BallSpec, method: CountMethod, tol: f64, exec: Execution) -> Result<CountRecord, ExactLatError> {
    match method {
        CountMethod::RowRecursive => count_identity_ball(spec, exec),
        CountMethod::GenericForm => count_general_ball(spec, tol, exec),
        CountMethod::Naive => naive_count(spec, tol),
    }
}

/// Every member, each exactly once, in lexicographic row order.
pub fn enumerate_ball(spec: &BallSpec, tol: f64) -> Result<Vec<IntegerMatrix>, ExactLatError> {
    let mut out = if spec.is_identity() {
        identity::RowSearch::new(spec.n(), budget_of(spec)?).enumerate()
    } else {
        check_tol(tol)?;
        general::Form::new(spec, tol)?.enumerate()
    };
    out.sort();
    Ok(out)
}

/// A contiguous slice of the first-level search space.
///
/// For identity base points the range indexes the lexicographically sorted
/// first-row candidates (taken up to sign); for general base points it is a
/// range of values of the outermost enumeration coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkUnit {
    pub index: usize,
    pub start: i64,
    pub end: i64,
    identity: bool,
}

/// Partial result of one [`WorkUnit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PartialCount {
    pub count: u64,
    pub borderline: u64,
}

/// Splits the first-level search space into exactly `k` disjoint contiguous
/// ranges (some possibly empty). `k = 0` is treated as 1.
pub fn partition_workload(spec: &BallSpec, k: usize, tol: f64) -> Result<Vec<WorkUnit>, ExactLatError> {
    let k = k.max(1);
    if spec.is_identity() {
        let search = identity::RowSearch::new(spec.n(), budget_of(spec)?);
        let total = search.first_rows() as i64;
        Ok(split_even(0, total, k)
            .into_iter()
            .enumerate()
            .map(|(index, (start, end))| WorkUnit {
                index,
                start,
                end,
                identity: true,
            })
            .collect())
    } else {
        check_tol(tol)?;
        let form = general::Form::new(spec, tol)?;
        Ok(form
            .top_units(k)
            .into_iter()
            .enumerate()
            .map(|(index, (start, end))| WorkUnit {
                index,
                start,
                end,
                identity: false,
            })
            .collect())
    }
}

/// Counts one work unit of `spec` as produced by [`partition_workload`] with the
/// same `tol`.
pub fn count_partial(spec: &BallSpec, unit: &WorkUnit, tol: f64) -> Result<PartialCount, ExactLatError> {
    if unit.identity != spec.is_identity() {
        return Err(ExactLatError::ForeignWorkUnit);
    }
    if spec.is_identity() {
        let search = identity::RowSearch::new(spec.n(), budget_of(spec)?);
        let total = search.first_rows();
        let (s, e) = (unit.start.max(0) as usize, unit.end.max(0) as usize);
        if s > e || e > total {
            return Err(ExactLatError::ForeignWorkUnit);
        }
        Ok(PartialCount {
            count: search.count(s..e, Execution::Sequential),
            borderline: 0,
        })
    } else {
        let form = general::Form::new(spec, tol)?;
        let (count, borderline) = form.count_range(unit.start..unit.end);
        Ok(PartialCount { count, borderline })
    }
}

/// `k` contiguous half-open ranges covering `[lo, hi)`, sizes differing by ≤ 1.
fn split_even(lo: i64, hi: i64, k: usize) -> Vec<(i64, i64)> {
    let len = (hi - lo).max(0);
    let k = k as i64;
    (0..k)
        .map(|i| (lo + len * i / k, lo + len * (i + 1) / k))
        .collect()
}
