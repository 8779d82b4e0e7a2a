//! Direct quadrature of the Abel-transform integral
//!
//! `γ_n ∫_{‖a‖₂ ≤ T} (T² − ‖a‖₂²)^{n(n−1)/4} ∏_j a_j^{−μ_j} ∏ dy_j/y_j`
//!
//! over the chart `a = (y₁, …, y_{n−1}, (y₁⋯y_{n−1})⁻¹)`, for `n = 2, 3`. The
//! chart measure is the plain `∏ dy_j/y_j`; the constant relating it to the
//! normalization of the contour route is [`calibrated_kappa`].

use std::f64::consts::{FRAC_PI_2, PI};
use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;

use super::gamma::ln_gamma_real;
use super::{chi_transform_contour, ContourSpec, SpectralParameter, SphTransError, TransformValue};

const RULE_POINTS: usize = 16;
const QUAD_TOL: f64 = 1e-11;
const START_PANELS: usize = 4;
const MAX_PANELS_1D: usize = 4096;
const MAX_PANELS_2D: usize = 256;
/// Tolerance on `∏ a_j = 1`.
const UNIMODULAR_TOL: f64 = 1e-9;

fn rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(NonZeroUsize::new(RULE_POINTS).unwrap()))
        .as_node_weight_pairs()
}

/// `γ_n = π^{n(n−1)/4} / Γ(1 + n(n−1)/4)`, the volume of the unit ball in
/// dimension `n(n−1)/2`.
pub fn gamma_n(n: usize) -> f64 {
    let e = (n * (n - 1)) as f64 / 4.0;
    (e * PI.ln() - ln_gamma_real(1.0 + e)).exp()
}

/// Closed form of the Abel transform of the radius-`T` ball indicator at the
/// diagonal point `a`:
/// `γ_n (T² − ‖a‖₂²)^{n(n−1)/4} / ∏_{k<n} a_k^{n−k}`, and `0` outside the ball.
pub fn abel_chi(n: usize, t: f64, a: &[f64]) -> Result<f64, SphTransError> {
    if n < 2 || a.len() != n {
        return Err(SphTransError::Dimension(a.len()));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(SphTransError::Radius(t));
    }
    if a.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(SphTransError::NonUnimodular(f64::NAN));
    }
    let ln_prod: f64 = a.iter().map(|x| x.ln()).sum();
    if ln_prod.abs() > UNIMODULAR_TOL {
        return Err(SphTransError::NonUnimodular(ln_prod.exp()));
    }
    let r2 = t * t - a.iter().map(|x| x * x).sum::<f64>();
    if r2 < 0.0 {
        return Ok(0.0);
    }
    let e = (n * (n - 1)) as f64 / 4.0;
    let weight: f64 = a[..n - 1]
        .iter()
        .enumerate()
        .map(|(k, x)| (n - 1 - k) as f64 * x.ln())
        .sum();
    Ok(gamma_n(n) * (e * r2.ln() - weight).exp())
}

/// Composite Gauss–Legendre over `u = mid + half·sin θ`, `θ ∈ [−π/2, π/2]`; the
/// substitution flattens the square-root behaviour at both ends.
fn sine_panels(mid: f64, half: f64, panels: usize, mut f: impl FnMut(f64) -> Complex64) -> Complex64 {
    let w = PI / panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let lo = -FRAC_PI_2 + p as f64 * w;
        for &(x, wt) in rule() {
            let th = lo + 0.5 * w * (x + 1.0);
            acc += f(mid + half * th.sin()) * (wt * half * th.cos());
        }
    }
    acc * (0.5 * w)
}

/// Doubles the panel count until two successive values agree.
fn refine(max_panels: usize, mut eval: impl FnMut(usize) -> Complex64) -> Result<(Complex64, f64, usize), SphTransError> {
    let mut panels = START_PANELS;
    let mut prev = eval(panels);
    let mut evals = panels;
    loop {
        panels *= 2;
        let cur = eval(panels);
        evals += panels;
        let change = (cur - prev).norm();
        if change <= QUAD_TOL * cur.norm() || cur.norm() == 0.0 {
            return Ok((cur, change, evals));
        }
        if panels >= max_panels {
            return Err(SphTransError::Quadrature {
                panels,
                change: change / cur.norm(),
            });
        }
        prev = cur;
    }
}

/// Direct quadrature with the plain chart measure (`κ = 1`); multiply by
/// [`calibrated_kappa`] to compare with the contour route.
pub fn chi_transform_direct(t: f64, mu: &SpectralParameter) -> Result<TransformValue, SphTransError> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(SphTransError::Radius(t));
    }
    let m = mu.mu();
    let (value, change, evals) = match m.len() {
        2 => direct2(t, m[1] - m[0])?,
        3 => direct3(t, m[2] - m[0], m[2] - m[1])?,
        n => return Err(SphTransError::UnsupportedDimension(n)),
    };
    Ok(TransformValue {
        value,
        tail_bound: change,
        evaluations: evals * RULE_POINTS,
    })
}

/// `2 ∫ (T² − 2cosh 2u)^{1/2} e^{u(μ₂−μ₁)} du` over `2cosh 2u ≤ T²`.
fn direct2(t: f64, d: Complex64) -> Result<(Complex64, f64, usize), SphTransError> {
    let t2 = t * t;
    if t2 <= 2.0 {
        return Ok((Complex64::new(0.0, 0.0), 0.0, 0));
    }
    let big_u = (t2 / 2.0).acosh() / 2.0;
    let f = |u: f64| (d * u).exp() * (2.0 * (t2 - 2.0 * (2.0 * u).cosh()).max(0.0).sqrt());
    refine(MAX_PANELS_1D, |p| sine_panels(0.0, big_u, p, f))
}

/// `(4π/3) ∬ (T² − e^{2u₁} − e^{2u₂} − e^{−2u₁−2u₂})^{3/2} e^{u₁(μ₃−μ₁) + u₂(μ₃−μ₂)} du₁ du₂`.
fn direct3(t: f64, d1: Complex64, d2: Complex64) -> Result<(Complex64, f64, usize), SphTransError> {
    let t2 = t * t;
    if t2 <= 3.0 {
        return Ok((Complex64::new(0.0, 0.0), 0.0, 0));
    }
    // u₁-range: T² − e^{2u} ≥ 2e^{−u}, maximal at u = 0
    let h = |u: f64| t2 - (2.0 * u).exp() - 2.0 * (-u).exp();
    let lo = bisect(h, -2.0 * t.ln() - 1.0, 0.0);
    let hi = bisect(h, t.ln(), 0.0);
    let outer_mid = 0.5 * (lo + hi);
    let outer_half = 0.5 * (hi - lo);
    let g = gamma_n(3);
    refine(MAX_PANELS_2D, |p| {
        let inner = |u1: f64| {
            let r = t2 - (2.0 * u1).exp();
            let b = (-2.0 * u1).exp();
            let sq = (r * r - 4.0 * b).max(0.0).sqrt();
            let (xlo, xhi) = (2.0 * b / (r + sq), (r + sq) / 2.0);
            let (v_lo, v_hi) = (0.5 * xlo.ln(), 0.5 * xhi.ln());
            let e1 = (d1 * u1).exp();
            let f = |u2: f64| {
                let x = (2.0 * u2).exp();
                let q = (r - x - b / x).max(0.0);
                (d2 * u2).exp() * (q * q.sqrt())
            };
            e1 * sine_panels(0.5 * (v_lo + v_hi), 0.5 * (v_hi - v_lo), p, f)
        };
        sine_panels(outer_mid, outer_half, p, inner) * g
    })
}

/// Root of `h` between `neg` (where `h < 0`) and `pos` (where `h > 0`).
fn bisect(h: impl Fn(f64) -> f64, mut neg: f64, mut pos: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (neg + pos);
        if mid == neg || mid == pos {
            break;
        }
        if h(mid) < 0.0 {
            neg = mid;
        } else {
            pos = mid;
        }
    }
    0.5 * (neg + pos)
}

fn reference(n: usize) -> Result<(f64, SpectralParameter), SphTransError> {
    match n {
        2 => Ok((7.0, SpectralParameter::tempered(&[0.7, -0.7])?)),
        3 => Ok((5.0, SpectralParameter::from_pairs(&[(0.3, 0.8), (-0.3, 0.8), (0.0, -1.6)])?)),
        _ => Err(SphTransError::UnsupportedDimension(n)),
    }
}

/// `κ_n = contour / direct` at a fixed generic reference point, computed once.
pub fn calibrated_kappa(n: usize) -> Result<f64, SphTransError> {
    static KAPPA: [OnceLock<f64>; 2] = [OnceLock::new(), OnceLock::new()];
    let slot = match n {
        2 | 3 => &KAPPA[n - 2],
        _ => return Err(SphTransError::UnsupportedDimension(n)),
    };
    if let Some(&k) = slot.get() {
        return Ok(k);
    }
    let (t, mu) = reference(n)?;
    let c = chi_transform_contour(t, &mu, &ContourSpec::default())?.value;
    let d = chi_transform_direct(t, &mu)?.value;
    Ok(*slot.get_or_init(|| (c / d).re))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_small() {
        assert!((gamma_n(2) - 2.0).abs() < 1e-14);
        assert!((gamma_n(3) - 4.0 * PI / 3.0).abs() < 1e-13);
    }

    #[test]
    fn abel_support_and_units() {
        assert_eq!(abel_chi(2, 2.0, &[3.0, 1.0 / 3.0]).unwrap(), 0.0);
        assert!(abel_chi(2, 2.0, &[1.0, 2.0]).is_err());
        let y: f64 = 1.3;
        let v = abel_chi(2, 3.0, &[y, 1.0 / y]).unwrap();
        let want = 2.0 * (9.0 - y * y - 1.0 / (y * y)).sqrt() / y;
        assert!((v - want).abs() < 1e-13);
    }

    #[test]
    fn direct2_at_zero_parameter() {
        // ∫ 2(T² − 2cosh 2u)^{1/2} du is elementary only numerically; compare two rules
        let mu = SpectralParameter::tempered(&[0.0, 0.0]).unwrap();
        let a = chi_transform_direct(6.0, &mu).unwrap();
        assert!(a.value.im.abs() < 1e-14 && a.value.re > 0.0);
    }
}
