//! Spherical transform `χ̃_T(μ)` of the indicator of the Frobenius ball of radius
//! `T` on `SL(n, R)`, evaluated three ways, and the bound envelopes for it.
//!
//! All routes share the normalization
//!
//! `χ̃_T(μ) = (π^{n(n−1)/4}/2ⁿ) T^{n(n−1)/2} · (1/2πi) ∫ T^{ns} ∏_j Γ((s−μ_j)/2) / Γ(ns/2 + n(n−1)/4 + 1) ds`.
//!
//! - [`chi_transform_contour`]: trapezoid rule on a contour right of the poles.
//! - [`chi_transform_residues`]: the truncated residue series.
//! - [`chi_transform_direct`]: quadrature of the Abel-transform integral for
//!   `n ≤ 3`, which agrees with the other two up to the measure constant
//!   [`calibrated_kappa`].

mod contour;
mod direct;
mod envelope;
mod gamma;
mod param;
mod residues;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

pub use contour::{chi_transform_contour, chi_transform_contour_batch, ContourShape, ContourSpec};
pub use direct::{abel_chi, calibrated_kappa, chi_transform_direct, gamma_n};
pub use envelope::{cor1_envelope, g_weight, lemma2_envelope, lemma3_envelope, EnvelopeParams, Regime};
pub use gamma::{ln_gamma, ln_gamma_real, ln_rgamma};
pub use param::SpectralParameter;
pub use residues::{chi_transform_residues, chi_transform_residues_with_gap, DEFAULT_MIN_GAP};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SphTransError {
    #[error("dimension must be at least 2, got {0}")]
    Dimension(usize),
    #[error("direct quadrature supports n = 2, 3 only, got {0}")]
    UnsupportedDimension(usize),
    #[error("invalid spectral parameter: {0}")]
    InvalidParameter(String),
    #[error("radius must be positive and finite, got {0}")]
    Radius(f64),
    #[error("contour abscissa {abscissa} is not right of max Re mu = {max_re}")]
    ContourLeftOfPoles { abscissa: f64, max_re: f64 },
    #[error("quadrature step {step} is not small against the pole gap at abscissa {abscissa}")]
    PoleNearContour { abscissa: f64, step: f64 },
    #[error("tail bound {bound:e} is not negligible against |integral| = {value:e}")]
    NonConvergentTail { bound: f64, value: f64 },
    #[error("mu_{i} and mu_{j} coincide; the residue series needs distinct parameters")]
    CoincidentParameters { i: usize, j: usize },
    #[error("poles from mu_{i} and mu_{j} collide (difference is an even integer)")]
    PoleCollision { i: usize, j: usize },
    #[error("quadrature did not converge after {panels} panels (relative change {change:e})")]
    Quadrature { panels: usize, change: f64 },
    #[error("point is not unimodular: product of entries is {0}")]
    NonUnimodular(f64),
    #[error("envelope parameter out of range: {0}")]
    EnvelopeRange(String),
    #[error("regime violation: |mu| = {norm} exceeds T^(2-kappa) = {limit}")]
    RegimeViolation { norm: f64, limit: f64 },
}

/// Value of a transform evaluation with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransformValue {
    pub value: Complex64,
    /// Truncation estimate (tail of the contour, last residue shell, or last
    /// quadrature refinement change).
    pub tail_bound: f64,
    pub evaluations: usize,
}

/// `ln(π^{n(n−1)/4} T^{n(n−1)/2} / 2ⁿ)`.
pub(crate) fn prefactor_ln(n: usize, t: f64) -> f64 {
    let nf = n as f64;
    let e = nf * (nf - 1.0) / 4.0;
    e * std::f64::consts::PI.ln() - nf * std::f64::consts::LN_2 + 2.0 * e * t.ln()
}
