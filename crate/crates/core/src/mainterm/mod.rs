//! The main-term constant
//!
//! `c_n = π^{n²/2} / (Γ((n²−n+2)/2) Γ(n/2) ζ(2)⋯ζ(n))`
//!
//! in arbitrary precision, and log-log fits of `|N(T) − c_n T^{n(n−1)}|`.

mod fit;
mod hp;
mod special;

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

pub use astro_float::BigFloat;
use num_rational::BigRational;
use thiserror::Error;

pub use fit::{fit_error_exponent, fit_points, FitReport};
use hp::Hp;

/// Default working precision in bits.
pub const DEFAULT_PRECISION_BITS: usize = 128;

/// Extra bits carried internally beyond the requested precision.
const GUARD_BITS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MainTermError {
    #[error("zeta argument must be an integer ≥ 2, got {0}")]
    ZetaArgument(u32),
    #[error("dimension must be at least 2, got {0}")]
    Dimension(usize),
    #[error("precision must be between 53 and 65536 bits, got {0}")]
    Precision(usize),
    #[error("radius must be finite and non-negative, got {0}")]
    Radius(f64),
    #[error("log-gamma argument must be positive")]
    GammaArgument,
    #[error("need at least 3 points with nonzero error, got {usable} ({excluded} excluded)")]
    TooFewPoints { usable: usize, excluded: usize },
    #[error("radii must be strictly increasing")]
    NotIncreasing,
    #[error("records mix dimensions or base points")]
    MixedRecords,
}

/// A real number carried at a stated binary precision.
#[derive(Debug, Clone)]
pub struct HpValue {
    value: BigFloat,
    precision_bits: usize,
}

impl HpValue {
    pub fn value(&self) -> &BigFloat {
        &self.value
    }

    pub fn precision_bits(&self) -> usize {
        self.precision_bits
    }

    pub fn to_f64(&self) -> f64 {
        Hp::new(self.precision_bits).to_f64(&self.value)
    }

    /// Scientific-notation decimal expansion carrying the full precision.
    pub fn to_decimal(&self) -> String {
        Hp::new(self.precision_bits).decimal(&self.value)
    }

    /// `|self − other| ≤ 2^{−bits} · max(1, |self|)`.
    pub fn agrees_with(&self, other: &HpValue, bits: usize) -> bool {
        let p = self.precision_bits.max(other.precision_bits) + GUARD_BITS;
        let hp = Hp::new(p);
        let diff = hp.sub(&self.value, &other.value);
        if diff.is_zero() {
            return true;
        }
        let scale = Hp::exponent(&self.value).max(1);
        Hp::exponent(&diff) <= scale - bits as i64
    }
}

/// `c_n` at a given precision.
#[derive(Debug, Clone)]
pub struct AsymptoticConstant {
    pub n: usize,
    pub value: HpValue,
}

impl AsymptoticConstant {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

fn check_precision(bits: usize) -> Result<(), MainTermError> {
    if (53..=65536).contains(&bits) {
        Ok(())
    } else {
        Err(MainTermError::Precision(bits))
    }
}

fn finish(value: BigFloat, bits: usize) -> HpValue {
    let mut value = value;
    // round to the requested precision; the guard bits were only for the computation
    let _ = value.set_precision(bits, astro_float::RoundingMode::ToEven);
    HpValue {
        value,
        precision_bits: bits,
    }
}

/// `ζ(k)` for integer `k ≥ 2`.
pub fn zeta_at_integer(k: u32, precision_bits: usize) -> Result<HpValue, MainTermError> {
    if k < 2 {
        return Err(MainTermError::ZetaArgument(k));
    }
    check_precision(precision_bits)?;
    let mut hp = Hp::new(precision_bits + GUARD_BITS);
    Ok(finish(special::zeta(k, &mut hp), precision_bits))
}

/// `ln Γ(x)` for rational `x > 0`.
pub fn ln_gamma_rational(x: &BigRational, precision_bits: usize) -> Result<HpValue, MainTermError> {
    use num_traits::Signed;
    if !x.is_positive() {
        return Err(MainTermError::GammaArgument);
    }
    check_precision(precision_bits)?;
    let mut hp = Hp::new(precision_bits + GUARD_BITS);
    let xf = hp.rational(x);
    Ok(finish(special::ln_gamma(&xf, &mut hp), precision_bits))
}

fn compute_constant(n: usize, bits: usize) -> BigFloat {
    let mut hp = Hp::new(bits + GUARD_BITS);
    let pi = hp.pi();
    let ln_pi = hp.ln(&pi);
    let n2 = (n * n) as i64;
    let mut ln_c = hp.mul(&hp.ratio(n2, 2), &ln_pi);
    let g1 = hp.ratio(n2 - n as i64 + 2, 2);
    let g2 = hp.ratio(n as i64, 2);
    let lg1 = special::ln_gamma(&g1, &mut hp);
    let lg2 = special::ln_gamma(&g2, &mut hp);
    ln_c = hp.sub(&ln_c, &lg1);
    ln_c = hp.sub(&ln_c, &lg2);
    for k in 2..=n as u32 {
        let z = special::zeta(k, &mut hp);
        let lz = hp.ln(&z);
        ln_c = hp.sub(&ln_c, &lz);
    }
    hp.exp(&ln_c)
}

/// `c_n`, cached per `(n, precision_bits)`.
pub fn main_constant(n: usize, precision_bits: usize) -> Result<AsymptoticConstant, MainTermError> {
    if n < 2 {
        return Err(MainTermError::Dimension(n));
    }
    check_precision(precision_bits)?;
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), HpValue>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&(n, precision_bits)) {
        return Ok(AsymptoticConstant { n, value: v.clone() });
    }
    let value = finish(compute_constant(n, precision_bits), precision_bits);
    cache
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .insert((n, precision_bits), value.clone());
    Ok(AsymptoticConstant { n, value })
}

/// `c_n` as `f64`, at the default precision.
pub fn main_constant_f64(n: usize) -> Result<f64, MainTermError> {
    Ok(main_constant(n, DEFAULT_PRECISION_BITS)?.to_f64())
}

/// `c_n T^{n(n−1)}`.
pub fn main_term(n: usize, t: f64) -> Result<f64, MainTermError> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(MainTermError::Radius(t));
    }
    let c = main_constant_f64(n)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    Ok(c * t.powi((n * (n - 1)) as i32))
}
