//! Bound envelopes for `|χ̃_T(μ)|`. Implicit constants are not computable, so
//! every envelope is a shape to be matched up to a fitted constant factor.

use serde::{Deserialize, Serialize};

use super::{SpectralParameter, SphTransError};

/// `G(a) = ∏_j (1 + max a − a_j)^{−1/2} + ∏_j (1 + a_j − min a)^{−1/2}`.
pub fn g_weight(a: &[f64]) -> f64 {
    if a.is_empty() {
        return 2.0;
    }
    let hi = a.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = a.iter().copied().fold(f64::INFINITY, f64::min);
    let top: f64 = a.iter().map(|x| (1.0 + hi - x).powf(-0.5)).product();
    let bottom: f64 = a.iter().map(|x| (1.0 + x - lo).powf(-0.5)).product();
    top + bottom
}

/// Smoothing parameters: radius `T ≥ 1`, width `δ ∈ (0, 1)`, decay order `A > 0`
/// and the regime margin `κ > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeParams {
    pub t: f64,
    pub delta: f64,
    pub a: f64,
    pub kappa: f64,
}

impl EnvelopeParams {
    pub fn new(t: f64, delta: f64, a: f64, kappa: f64) -> Result<Self, SphTransError> {
        let p = Self { t, delta, a, kappa };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<(), SphTransError> {
        if !(self.t >= 1.0 && self.t.is_finite()) {
            return Err(SphTransError::EnvelopeRange(format!("T = {} must be >= 1", self.t)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(SphTransError::EnvelopeRange(format!("delta = {} must lie in (0, 1)", self.delta)));
        }
        if !(self.a > 0.0 && self.a.is_finite()) {
            return Err(SphTransError::EnvelopeRange(format!("A = {} must be positive", self.a)));
        }
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return Err(SphTransError::EnvelopeRange(format!("kappa = {} must be positive", self.kappa)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Regime {
    /// `T^{n(n−1)/2 + n‖Re μ‖}`, valid for all `μ`.
    General,
    /// Adds the decay in `μ`; valid for `‖μ‖ ≤ T^{2−κ}`.
    Bounded,
}

/// `(1 + δ‖μ‖)^{−A}`: decay of the transform of the smoothing bump.
pub fn lemma2_envelope(params: &EnvelopeParams, mu: &SpectralParameter) -> f64 {
    (1.0 + params.delta * mu.norm()).powf(-params.a)
}

/// Envelope for the transform of the sharp ball indicator.
pub fn lemma3_envelope(t: f64, mu: &SpectralParameter, kappa: f64, regime: Regime) -> Result<f64, SphTransError> {
    if !(t >= 1.0 && t.is_finite()) {
        return Err(SphTransError::Radius(t));
    }
    let n = mu.n() as f64;
    let re = mu.re_norm();
    let base = t.powf(n * (n - 1.0) / 2.0 + n * re);
    match regime {
        Regime::General => Ok(base),
        Regime::Bounded => {
            let norm = mu.norm();
            let limit = t.powf(2.0 - kappa);
            if norm > limit {
                return Err(SphTransError::RegimeViolation { norm, limit });
            }
            let decay = (1.0 + norm).powf(n * (n - 1.0) / 4.0 + (1.0 + re) / 2.0);
            Ok(base * g_weight(&mu.im_parts()) / decay)
        }
    }
}

/// Envelope for the smoothed indicator: the bounded-regime ball envelope times
/// the smoothing decay.
pub fn cor1_envelope(params: &EnvelopeParams, mu: &SpectralParameter) -> Result<f64, SphTransError> {
    params.validate()?;
    let floor = params.t.powf(-2.0 + params.kappa);
    if params.delta < floor {
        return Err(SphTransError::EnvelopeRange(format!(
            "delta = {} is below T^(-2+kappa) = {floor}",
            params.delta
        )));
    }
    Ok(lemma3_envelope(params.t, mu, params.kappa, Regime::Bounded)? * lemma2_envelope(params, mu))
}
