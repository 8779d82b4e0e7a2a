//! Exact minimax over `α` for `n = 3, 4`: every case group contributes the line
//! `α ↦ a − α·b` (bound `T^a δ^b` with `δ = T^{−α}`), the smoothing error the
//! line `n(n−1) − α`, and the optimum of the upper envelope sits at an
//! intersection of two lines.

use num_rational::Rational64;
use serde::Serialize;

use crate::spectrum::case_table;

use super::{ExpOptError, Method, OptimizationResult};

/// `value(α) = intercept + slope·α`, tagged with its origin.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Line {
    pub name: String,
    pub intercept: Rational64,
    pub slope: Rational64,
}

impl Line {
    pub fn eval(&self, alpha: Rational64) -> Rational64 {
        self.intercept + self.slope * alpha
    }
}

/// Exact minimizer of `max_i line_i(α)` over the open interval `(lo, hi)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnvelopeMin {
    pub alpha: Rational64,
    pub value: Rational64,
    pub active: Vec<String>,
}

/// Minimizes the upper envelope of `lines` over `(lo, hi)`. Fails if the
/// envelope is not bounded away from the endpoints (the minimum would sit on
/// the boundary).
pub fn minimize_envelope(lines: &[Line], lo: Rational64, hi: Rational64) -> Result<EnvelopeMin, ExpOptError> {
    let env = |a: Rational64| lines.iter().map(|l| l.eval(a)).max().expect("non-empty");
    let mut cands = Vec::new();
    for (i, p) in lines.iter().enumerate() {
        for q in &lines[i + 1..] {
            if p.slope != q.slope {
                let a = (q.intercept - p.intercept) / (p.slope - q.slope);
                if a > lo && a < hi {
                    cands.push(a);
                }
            }
        }
    }
    let best = cands
        .into_iter()
        .map(|a| (env(a), a))
        .min()
        .ok_or(ExpOptError::Unbounded)?;
    // a boundary minimum shows up as an envelope still decreasing at the right end
    // or increasing at the left end
    if env(hi) < best.0 || env(lo) < best.0 {
        return Err(ExpOptError::Unbounded);
    }
    let active = lines
        .iter()
        .filter(|l| l.eval(best.1) == best.0)
        .map(|l| l.name.clone())
        .collect();
    Ok(EnvelopeMin {
        alpha: best.1,
        value: best.0,
        active,
    })
}

/// The lines of the `n = 3, 4` case tables, with β-dependent groups split into
/// their values at both ends of `β ∈ [0, 1/2]` (the objective is affine in β,
/// so the supremum is at an end).
pub fn case_lines(n: usize) -> Result<Vec<Line>, ExpOptError> {
    let table = case_table(n).map_err(|_| ExpOptError::SmallRank(n))?;
    let mut lines = vec![Line {
        name: "smoothing".into(),
        intercept: table.smoothing.0,
        slope: -table.smoothing.1,
    }];
    for g in &table.groups {
        let mut ends = vec![(Rational64::from_integer(0), g.name.to_string())];
        if let Some(hi) = g.beta_max {
            ends.push((hi, format!("{} (beta = {hi})", g.name)));
            ends[0].1 = format!("{} (beta -> 0)", g.name);
        }
        for (beta, name) in ends {
            lines.push(Line {
                name,
                intercept: g.t_exp.eval(beta),
                slope: -g.delta_exp.eval(beta),
            });
        }
    }
    Ok(lines)
}

/// Exact optimal smoothing exponent for `n = 3, 4`.
pub fn small_rank_delta(n: usize) -> Result<OptimizationResult, ExpOptError> {
    let lines = case_lines(n)?;
    let m = minimize_envelope(&lines, Rational64::from_integer(0), Rational64::from_integer(2))?;
    let nn = Rational64::from_integer((n * (n - 1)) as i64);
    Ok(OptimizationResult::exact(n, m.alpha, m.value, nn - m.value, m.active, Method::ClosedForm))
}
