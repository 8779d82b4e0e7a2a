//! Residue expansion: the poles of `Γ((s−μ_j)/2)` at `s = μ_j − 2k` contribute
//!
//! `2 (−1)^k/k! · T^{n(μ_j−2k)} ∏_{i≠j} Γ((μ_j−μ_i)/2 − k) / Γ(nμ_j/2 + n(n−1)/4 + 1 − nk)`.
//!
//! Only simple poles are handled: parameters where two poles can collide are
//! rejected.

use num_complex::Complex64;

use super::gamma::{ln_gamma, ln_rgamma};
use super::{prefactor_ln, SpectralParameter, SphTransError, TransformValue};

/// Minimum distance of `(μ_j − μ_i)/2` from the integers.
pub const DEFAULT_MIN_GAP: f64 = 1e-6;

/// Residue sum over `j` and `0 ≤ k ≤ depth`; `tail_bound` is the modulus of the
/// last shell `k = depth`.
pub fn chi_transform_residues(t: f64, mu: &SpectralParameter, depth: usize) -> Result<TransformValue, SphTransError> {
    chi_transform_residues_with_gap(t, mu, depth, DEFAULT_MIN_GAP)
}

pub fn chi_transform_residues_with_gap(
    t: f64,
    mu: &SpectralParameter,
    depth: usize,
    min_gap: f64,
) -> Result<TransformValue, SphTransError> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(SphTransError::Radius(t));
    }
    let m = mu.mu();
    let n = m.len();
    for j in 0..n {
        for i in j + 1..n {
            let d = (m[j] - m[i]) / 2.0;
            if (m[j] - m[i]).norm() < min_gap {
                return Err(SphTransError::CoincidentParameters { i, j });
            }
            // (μ_j − μ_i)/2 − k hits a pole of Γ for some k ≥ 0 on either side
            let dist = Complex64::new(d.re - d.re.round(), d.im).norm();
            if dist < min_gap {
                return Err(SphTransError::PoleCollision { i, j });
            }
        }
    }
    let nf = n as f64;
    let ln_t = t.ln();
    let pre = prefactor_ln(n, t);
    let shift = nf * (nf - 1.0) / 4.0 + 1.0;
    let mut total = Complex64::new(0.0, 0.0);
    let mut shell = 0.0;
    let mut ln_fact = 0.0f64;
    for k in 0..=depth {
        let kf = k as f64;
        if k > 0 {
            ln_fact += kf.ln();
        }
        let mut shell_sum = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let Some(lr) = ln_rgamma(nf * m[j] / 2.0 + shift - nf * kf) else {
                continue;
            };
            let mut acc = lr + pre + std::f64::consts::LN_2 - ln_fact + nf * (m[j] - 2.0 * kf) * ln_t;
            for i in 0..n {
                if i != j {
                    acc += ln_gamma((m[j] - m[i]) / 2.0 - kf);
                }
            }
            let term = acc.exp();
            shell_sum += if k % 2 == 0 { term } else { -term };
        }
        total += shell_sum;
        shell = shell_sum.norm();
    }
    Ok(TransformValue {
        value: total,
        tail_bound: shell,
        evaluations: (depth + 1) * n,
    })
}
