//! Bernoulli numbers, `ζ(k)` by Euler–Maclaurin and `ln Γ` by shifted Stirling.

use std::sync::{Mutex, OnceLock};

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::hp::Hp;

/// `B_m` (with `B_1 = −1/2`), cached across calls.
pub(crate) fn bernoulli(m: usize) -> BigRational {
    static CACHE: OnceLock<Mutex<Vec<BigRational>>> = OnceLock::new();
    let mut cache = CACHE
        .get_or_init(|| Mutex::new(vec![BigRational::one()]))
        .lock()
        .unwrap_or_else(|e| e.into_inner());
    while cache.len() <= m {
        let k = cache.len();
        if k > 1 && k % 2 == 1 {
            cache.push(BigRational::zero());
            continue;
        }
        // Σ_{j<k} C(k+1, j) B_j + (k+1) B_k = 0
        let mut binom = BigInt::one();
        let mut s = BigRational::zero();
        for (j, b) in cache.iter().enumerate() {
            if !b.is_zero() {
                s += b * BigRational::from_integer(binom.clone());
            }
            binom = binom * BigInt::from(k + 1 - j) / BigInt::from(j + 1);
        }
        cache.push(-s / BigRational::from_integer(BigInt::from(k + 1)));
    }
    cache[m].clone()
}

/// `ζ(k)` for integer `k ≥ 2` at the context precision.
pub(crate) fn zeta(k: u32, hp: &mut Hp) -> BigFloat {
    let p = hp.p;
    let big_n = (p / 4 + 10) as i64;
    let nf = hp.int(big_n);
    let mut s = hp.int(0);
    for j in 1..big_n {
        let t = hp.powi(&hp.int(j), k as usize);
        s = hp.add(&s, &hp.div(&hp.int(1), &t));
    }
    // N^{1−k}/(k−1) + N^{−k}/2
    let n_pow_k = hp.powi(&nf, k as usize);
    let inv_nk = hp.div(&hp.int(1), &n_pow_k);
    s = hp.add(&s, &hp.div(&hp.mul(&nf, &inv_nk), &hp.int(k as i64 - 1)));
    s = hp.add(&s, &hp.div(&inv_nk, &hp.int(2)));
    // Σ B_{2i}/(2i)! · k(k+1)⋯(k+2i−2) · N^{−k−2i+1}
    let target = Hp::exponent(&s) - p as i64 - 8;
    let n2 = hp.mul(&nf, &nf);
    let mut npow = hp.mul(&inv_nk, &nf); // N^{1−k}, divided by N² per step
    let mut coef = BigRational::one(); // Π (k+j) / (2i)!
    let max_i = (std::f64::consts::PI * big_n as f64) as usize;
    for i in 1..=max_i {
        // coef_i = coef_{i−1} · (k+2i−3)(k+2i−2) / ((2i−1)(2i))
        coef = if i == 1 {
            BigRational::new(BigInt::from(k), BigInt::from(2))
        } else {
            let (k, i) = (k as i64, i as i64);
            coef * BigRational::new(
                BigInt::from((k + 2 * i - 3) * (k + 2 * i - 2)),
                BigInt::from((2 * i - 1) * (2 * i)),
            )
        };
        npow = hp.div(&npow, &n2);
        let c = bernoulli(2 * i) * &coef;
        let cf = hp.rational(&c);
        let term = hp.mul(&cf, &npow);
        s = hp.add(&s, &term);
        if Hp::exponent(&term) < target {
            break;
        }
    }
    s
}

/// `ln Γ(x)` for real `x > 0` at the context precision.
pub(crate) fn ln_gamma(x: &BigFloat, hp: &mut Hp) -> BigFloat {
    let p = hp.p;
    let threshold = hp.int((p as i64 / 4).max(20));
    // shift upward: Γ(x) = Γ(x+m) / (x(x+1)⋯(x+m−1))
    let mut y = x.clone();
    let mut prod = hp.int(1);
    while y.cmp(&threshold).is_some_and(|c| c < 0) {
        prod = hp.mul(&prod, &y);
        y = hp.add(&y, &hp.int(1));
    }
    let pi = hp.pi();
    let two_pi = hp.mul(&hp.int(2), &pi);
    let half = hp.ratio(1, 2);
    let ln_y = hp.ln(&y);
    let mut s = hp.mul(&hp.sub(&y, &half), &ln_y);
    s = hp.sub(&s, &y);
    let ln_two_pi = hp.ln(&two_pi);
    s = hp.add(&s, &hp.mul(&half, &ln_two_pi));
    // Σ B_{2k} / (2k(2k−1) y^{2k−1})
    let target = Hp::exponent(&s) - p as i64 - 8;
    let y2 = hp.mul(&y, &y);
    let mut ypow = y.clone();
    let max_k = (2.0 * hp.to_f64(&y)) as usize + 2;
    for k in 1..max_k {
        let c = bernoulli(2 * k) / BigRational::from_integer(BigInt::from(2 * k * (2 * k - 1)));
        let cf = hp.rational(&c);
        let term = hp.div(&cf, &ypow);
        s = hp.add(&s, &term);
        if Hp::exponent(&term) < target {
            break;
        }
        ypow = hp.mul(&ypow, &y2);
    }
    let ln_prod = hp.ln(&prod);
    hp.sub(&s, &ln_prod)
}
