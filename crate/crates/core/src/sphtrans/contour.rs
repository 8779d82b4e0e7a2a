//! Mellin–Barnes integral
//!
//! `(1/2πi) ∫ T^{ns} ∏_j Γ((s−μ_j)/2) / Γ(ns/2 + n(n−1)/4 + 1) ds`
//!
//! by the trapezoid rule on a smooth contour.
//!
//! The integrand behaves like `(T/√n)^{n Re s} |s|^{−(n²+n+2)/4}`. On a vertical
//! line that is only polynomial decay (`|t|^{−2}` for `n = 2`), so the default
//! contour bends towards the side where `(T/√n)^{n Re s}` decays:
//! `s(t) = c − λ(√(t² + t₀²) − t₀) + it`, with `t₀` large enough that the
//! contour stays right of every pole at the pole heights.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gamma::ln_gamma;
use super::{prefactor_ln, SpectralParameter, SphTransError, TransformValue};
use crate::{par, Execution};

/// Relative size below which integrand samples are considered negligible.
const NEGLIGIBLE: f64 = 1e-18;
/// Consecutive negligible samples required before truncating.
const QUIET_RUN: usize = 12;
/// Hard cap on samples per side.
const MAX_SAMPLES: usize = 4_000_000;
/// Tail target for the vertical line, relative to the integral.
const VERTICAL_TAIL_TARGET: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ContourShape {
    /// Bent towards the decaying half-plane; exponential tail.
    #[default]
    Bent,
    /// Plain vertical line `Re s = c`; polynomial tail.
    Vertical,
}

/// Contour parameters; `None` fields take automatic values.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ContourSpec {
    /// `Re s` at `t = 0`; default `max Re μ + 1`.
    pub abscissa: Option<f64>,
    /// Largest `|t|` sampled; default unlimited for `Bent`, `10⁴` for `Vertical`.
    pub truncation_height: Option<f64>,
    /// Trapezoid step; default from the analyticity strip and oscillation scale.
    pub step: Option<f64>,
    pub shape: ContourShape,
}

impl ContourSpec {
    pub fn with_abscissa(c: f64) -> Self {
        Self {
            abscissa: Some(c),
            ..Self::default()
        }
    }
}

struct Integrand<'a> {
    n: f64,
    ln_t: f64,
    mu: &'a [Complex64],
    shift: f64,
    /// log of the constant prefactor, folded in to avoid overflow
    offset: f64,
}

impl Integrand<'_> {
    fn ln_value(&self, s: Complex64) -> Complex64 {
        let mut acc = self.n * s * self.ln_t + self.offset;
        for &m in self.mu {
            acc += ln_gamma((s - m) / 2.0);
        }
        acc - ln_gamma(self.n * s / 2.0 + self.shift)
    }
}

/// Contour evaluation of the spherical transform of the radius-`T` ball indicator.
pub fn chi_transform_contour(
    t: f64,
    mu: &SpectralParameter,
    spec: &ContourSpec,
) -> Result<TransformValue, SphTransError> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(SphTransError::Radius(t));
    }
    let n = mu.n();
    let nf = n as f64;
    let max_re = mu.max_re();
    let c = spec.abscissa.unwrap_or(max_re + 1.0);
    if !(c > max_re) {
        return Err(SphTransError::ContourLeftOfPoles { abscissa: c, max_re });
    }
    let gap = c - max_re;
    let d = 0.75 * gap;
    let ln_t = t.ln();
    let osc = mu.im_norm().max(1.0);
    let h = spec
        .step
        .unwrap_or_else(|| (2.0 * PI * d / (40.0 + nf * d * ln_t.abs())).min(1.0 / osc));
    if !(h > 0.0) || h >= gap {
        return Err(SphTransError::PoleNearContour { abscissa: c, step: h });
    }
    let f = Integrand {
        n: nf,
        ln_t,
        mu: mu.mu(),
        shift: nf * (nf - 1.0) / 4.0 + 1.0,
        offset: prefactor_ln(n, t),
    };
    let ratio = t / nf.sqrt();
    let vertical_height = spec.truncation_height.unwrap_or(1e4);
    let (value, tail_bound, evaluations) = match spec.shape {
        // at T = √n nothing decays exponentially in either direction
        ContourShape::Bent if ratio.ln().abs() >= 1e-3 => {
            bent(&f, c, gap, h, mu.im_norm(), ratio, spec.truncation_height)?
        }
        _ => vertical(&f, c, h, nf, vertical_height)?,
    };
    Ok(TransformValue {
        value,
        tail_bound,
        evaluations,
    })
}

/// [`chi_transform_contour`] over many parameters; output order follows `mus`.
pub fn chi_transform_contour_batch(
    t: f64,
    mus: &[SpectralParameter],
    spec: &ContourSpec,
    exec: Execution,
) -> Vec<Result<TransformValue, SphTransError>> {
    par::map_collect(mus, exec, |mu| chi_transform_contour(t, mu, spec))
}

fn bent(
    f: &Integrand,
    c: f64,
    gap: f64,
    h: f64,
    tau: f64,
    ratio: f64,
    height: Option<f64>,
) -> Result<(Complex64, f64, usize), SphTransError> {
    let lam = if ratio > 1.0 { 1.0 } else { -1.0 };
    // horizontal displacement at |t| = τ is at most τ²/(2t₀) ≤ gap/4
    let t0 = (2.0 * tau * tau / gap).max(4.0);
    let g = |t: f64| {
        let r = (t * t + t0 * t0).sqrt();
        let s = Complex64::new(c - lam * (r - t0), t);
        let ds = Complex64::new(1.0, lam * t / r);
        (f.ln_value(s).exp() * ds) / (2.0 * PI)
    };
    let limit = height.unwrap_or(f64::INFINITY);
    let mut sum = g(0.0);
    let mut evals = 1usize;
    let mut tail = 0.0;
    for sign in [1.0, -1.0] {
        let mut quiet = 0;
        let mut last = [0.0f64; 2];
        let mut k = 1usize;
        loop {
            let t = sign * k as f64 * h;
            if t.abs() > limit || k > MAX_SAMPLES {
                // geometric extrapolation of the remaining samples
                let r = if last[0] > 0.0 { (last[1] / last[0]).min(0.999) } else { 0.999 };
                let rest = last[1] * r / (1.0 - r);
                if t.abs() > limit {
                    tail += rest;
                    break;
                }
                return Err(SphTransError::NonConvergentTail {
                    bound: rest * h,
                    value: sum.norm() * h,
                });
            }
            let v = g(t);
            evals += 1;
            sum += v;
            let mag = v.norm();
            last = [last[1], mag];
            if t.abs() > tau + t0 && mag < NEGLIGIBLE * sum.norm() {
                quiet += 1;
                if quiet >= QUIET_RUN {
                    let r = if last[0] > 0.0 { (last[1] / last[0]).min(0.999) } else { 0.0 };
                    tail += mag * r / (1.0 - r);
                    break;
                }
            } else {
                quiet = 0;
            }
            k += 1;
        }
    }
    Ok((sum * h, tail * h, evals))
}

fn vertical(f: &Integrand, c: f64, h: f64, n: f64, height: f64) -> Result<(Complex64, f64, usize), SphTransError> {
    let p = (n * n + n + 2.0) / 4.0;
    let g = |t: f64| f.ln_value(Complex64::new(c, t)).exp() / (2.0 * PI);
    let steps = (height / h).ceil() as usize;
    let mut sum = g(0.0);
    let mut evals = 1;
    let mut edge = 0.0;
    for k in 1..=steps {
        let t = k as f64 * h;
        let (a, b) = (g(t), g(-t));
        sum += a + b;
        evals += 2;
        if k == steps {
            edge = a.norm().max(b.norm());
        }
    }
    let value = sum * h;
    let big_h = steps as f64 * h;
    let tail = 2.0 * edge * big_h / (p - 1.0);
    if tail > VERTICAL_TAIL_TARGET * value.norm() {
        return Err(SphTransError::NonConvergentTail {
            bound: tail,
            value: value.norm(),
        });
    }
    Ok((value, tail, evals))
}
