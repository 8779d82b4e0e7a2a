use num_complex::Complex64;
use serde::Serialize;

use super::SphTransError;

/// Tolerance for the linear constraints on `μ`.
const CONSTRAINT_TOL: f64 = 1e-9;

/// `μ ∈ Cⁿ` with `Σμ_j = 0`, `{μ_j} = {−μ̄_j}` as multisets, and `Re μ`
/// majorized by `ρ = ((n−1)/2, …, (1−n)/2)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralParameter {
    mu: Vec<Complex64>,
}

impl SpectralParameter {
    pub fn new(mu: Vec<Complex64>) -> Result<Self, SphTransError> {
        let n = mu.len();
        if n < 2 {
            return Err(SphTransError::Dimension(n));
        }
        if mu.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(SphTransError::InvalidParameter("non-finite entry".into()));
        }
        let scale = 1.0 + mu.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let tol = CONSTRAINT_TOL * scale;
        let sum: Complex64 = mu.iter().sum();
        if sum.norm() > tol {
            return Err(SphTransError::InvalidParameter(format!("entries sum to {sum}, expected 0")));
        }
        // greedy matching of μ against −μ̄
        let mut unused: Vec<Complex64> = mu.iter().map(|z| -z.conj()).collect();
        for z in &mu {
            let Some(k) = (0..unused.len()).find(|&k| (unused[k] - z).norm() <= tol) else {
                return Err(SphTransError::InvalidParameter(format!(
                    "{z} has no partner −conj in the parameter"
                )));
            };
            unused.swap_remove(k);
        }
        let mut re: Vec<f64> = mu.iter().map(|z| z.re).collect();
        re.sort_by(|a, b| b.total_cmp(a));
        let (mut acc, mut acc_rho) = (0.0, 0.0);
        for (j, r) in re.iter().enumerate() {
            acc += r;
            acc_rho += (n as f64 - 1.0) / 2.0 - j as f64;
            if acc > acc_rho + tol {
                return Err(SphTransError::InvalidParameter(
                    "real part is not majorized by rho".into(),
                ));
            }
        }
        Ok(Self { mu })
    }

    /// From `(re, im)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self, SphTransError> {
        Self::new(pairs.iter().map(|&(a, b)| Complex64::new(a, b)).collect())
    }

    /// `(iτ, −iτ)`-type tempered parameter from imaginary parts summing to zero.
    pub fn tempered(im: &[f64]) -> Result<Self, SphTransError> {
        Self::new(im.iter().map(|&t| Complex64::new(0.0, t)).collect())
    }

    pub fn rho(n: usize) -> Self {
        Self {
            mu: (0..n)
                .map(|j| Complex64::new((n as f64 - 1.0) / 2.0 - j as f64, 0.0))
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &[Complex64] {
        &self.mu
    }

    /// Max-norm `max_j |μ_j|`.
    pub fn norm(&self) -> f64 {
        self.mu.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max_j |Re μ_j|`.
    pub fn re_norm(&self) -> f64 {
        self.mu.iter().map(|z| z.re.abs()).fold(0.0, f64::max)
    }

    pub fn max_re(&self) -> f64 {
        self.mu.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
    }

    /// `max_j |Im μ_j|`.
    pub fn im_norm(&self) -> f64 {
        self.mu.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn im_parts(&self) -> Vec<f64> {
        self.mu.iter().map(|z| z.im).collect()
    }

    pub fn is_tempered(&self) -> bool {
        self.mu.iter().all(|z| z.re == 0.0)
    }

    /// The same multiset in a different order.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            mu: perm.iter().map(|&i| self.mu[i]).collect(),
        }
    }
}
