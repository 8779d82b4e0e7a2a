use serde::Serialize;

use super::{main_term, MainTermError};
use crate::exactlat::CountRecord;

/// Least-squares fit of `ln|N(T) − c_n T^{n(n−1)}|` against `ln T`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    pub n: usize,
    pub main_exponent: u32,
    pub fitted_error_exponent: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
    /// `(T, count)` pairs that entered the fit.
    pub points_used: Vec<(f64, f64)>,
    /// Radii whose error was zero and which were dropped.
    pub excluded: Vec<f64>,
    /// Sign of `count − main` for each used point.
    pub signs: Vec<i8>,
}

/// Fits `(T, count)` pairs; `T` must be strictly increasing and positive.
pub fn fit_points(n: usize, points: &[(f64, f64)]) -> Result<FitReport, MainTermError> {
    if points.windows(2).any(|w| !(w[0].0 < w[1].0)) {
        return Err(MainTermError::NotIncreasing);
    }
    let mut used = Vec::new();
    let mut excluded = Vec::new();
    let mut xy = Vec::new();
    let mut signs = Vec::new();
    for &(t, count) in points {
        if !(t > 0.0 && t.is_finite()) {
            return Err(MainTermError::Radius(t));
        }
        let main = main_term(n, t)?;
        let err = count - main;
        if err.abs() <= 1e-13 * main.abs().max(1.0) {
            excluded.push(t);
            continue;
        }
        used.push((t, count));
        signs.push(if err > 0.0 { 1 } else { -1 });
        xy.push((t.ln(), err.abs().ln()));
    }
    if xy.len() < 3 {
        return Err(MainTermError::TooFewPoints {
            usable: xy.len(),
            excluded: excluded.len(),
        });
    }
    let m = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / m;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (xy.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum::<f64>() / m).sqrt();
    Ok(FitReport {
        n,
        main_exponent: (n * (n - 1)) as u32,
        fitted_error_exponent: slope,
        intercept,
        residual,
        points_used: used,
        excluded,
        signs,
    })
}

/// Fits count records sharing one dimension and one set of base points.
pub fn fit_error_exponent(records: &[CountRecord]) -> Result<FitReport, MainTermError> {
    let Some(first) = records.first() else {
        return Err(MainTermError::TooFewPoints { usable: 0, excluded: 0 });
    };
    let n = first.spec.n();
    if records
        .iter()
        .any(|r| r.spec.n() != n || r.spec.base() != first.spec.base())
    {
        return Err(MainTermError::MixedRecords);
    }
    let points: Vec<(f64, f64)> = records
        .iter()
        .map(|r| (r.spec.radius_sq().radius_f64(), r.count as f64))
        .collect();
    fit_points(n, &points)
}
