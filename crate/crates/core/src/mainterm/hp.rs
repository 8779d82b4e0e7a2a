//! Thin arithmetic context over `astro_float::BigFloat`.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_rational::BigRational;

const RM: RoundingMode = RoundingMode::ToEven;

/// Working precision plus the constants cache the transcendental functions need.
pub(crate) struct Hp {
    pub p: usize,
    cc: Consts,
}

impl Hp {
    pub fn new(p: usize) -> Self {
        Self {
            p,
            cc: Consts::new().expect("constants cache"),
        }
    }

    pub fn int(&self, v: i64) -> BigFloat {
        BigFloat::from_i64(v, self.p)
    }

    pub fn bigint(&mut self, v: &BigInt) -> BigFloat {
        BigFloat::parse(&v.to_string(), Radix::Dec, self.p, RM, &mut self.cc)
    }

    pub fn ratio(&self, num: i64, den: i64) -> BigFloat {
        self.div(&self.int(num), &self.int(den))
    }

    pub fn rational(&mut self, q: &BigRational) -> BigFloat {
        let n = self.bigint(q.numer());
        let d = self.bigint(q.denom());
        self.div(&n, &d)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.p, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.p, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.p, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.p, RM)
    }

    pub fn powi(&self, a: &BigFloat, k: usize) -> BigFloat {
        a.powi(k, self.p, RM)
    }

    pub fn ln(&mut self, a: &BigFloat) -> BigFloat {
        a.ln(self.p, RM, &mut self.cc)
    }

    pub fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(self.p, RM, &mut self.cc)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.p, RM)
    }

    /// Binary exponent `e` with `2^(e−1) ≤ |a| < 2^e`; very negative for zero.
    pub fn exponent(a: &BigFloat) -> i64 {
        if a.is_zero() {
            return i64::MIN / 4;
        }
        a.exponent().map_or(i64::MIN / 4, i64::from)
    }

    pub fn to_f64(&mut self, a: &BigFloat) -> f64 {
        self.decimal(a).parse().unwrap_or(f64::NAN)
    }

    /// Scientific decimal string, e.g. `1.6420...e+1`.
    pub fn decimal(&mut self, a: &BigFloat) -> String {
        a.format(Radix::Dec, RM, &mut self.cc).unwrap_or_else(|_| "NaN".into())
    }
}
