use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::ExactLatError;

/// Exact non-negative rational `T²`, written `"p/q"` (or `"p"`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RadiusSq(BigRational);

impl RadiusSq {
    pub fn new(value: BigRational) -> Result<Self, ExactLatError> {
        if value.is_negative() {
            return Err(ExactLatError::NegativeRadius(value.to_string()));
        }
        Ok(Self(value))
    }

    pub fn from_integer(v: u64) -> Self {
        Self(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_ratio(p: u64, q: u64) -> Result<Self, ExactLatError> {
        if q == 0 {
            return Err(ExactLatError::Parse("zero denominator".into()));
        }
        Self::new(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    /// `⌊T²⌋`: the integer norm budget for integer matrices.
    pub fn floor(&self) -> BigInt {
        self.0.numer().div_floor(self.0.denom())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::INFINITY)
    }

    /// `T = sqrt(T²)` as a float.
    pub fn radius_f64(&self) -> f64 {
        self.to_f64().sqrt()
    }
}

impl fmt::Display for RadiusSq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for RadiusSq {
    type Err = ExactLatError;

    /// Accepts `"p/q"` or `"p"` with integer `p ≥ 0`, `q > 0`. Decimal strings are
    /// rejected so that boundary membership stays exact.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ExactLatError::Parse(format!("radius_sq must be an exact rational \"p/q\", got {s:?}"));
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s, "1"),
        };
        let p: BigInt = p.parse().map_err(|_| bad())?;
        let q: BigInt = q.parse().map_err(|_| bad())?;
        if q.is_zero() || q.is_negative() {
            return Err(bad());
        }
        Self::new(BigRational::new(p, q))
    }
}

impl Serialize for RadiusSq {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RadiusSq {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A real square matrix, row-major, with the absolute precision its entries
/// are known to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealMatrix {
    pub n: usize,
    pub data: Vec<f64>,
    pub precision: f64,
}

impl RealMatrix {
    pub fn from_rows(rows: &[Vec<f64>], precision: f64) -> Result<Self, ExactLatError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(ExactLatError::Shape {
                expected: n,
                got: rows.iter().map(Vec::len).find(|&l| l != n).unwrap_or(0),
            });
        }
        Ok(Self {
            n,
            data: rows.iter().flatten().copied().collect(),
            precision,
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self {
            n,
            data,
            precision: 0.0,
        }
    }

    pub fn diag(d: &[f64]) -> Self {
        let n = d.len();
        let mut data = vec![0.0; n * n];
        for (i, &x) in d.iter().enumerate() {
            data[i * n + i] = x;
        }
        Self {
            n,
            data,
            precision: 0.0,
        }
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    pub(crate) fn as_nalgebra(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_row_slice(self.n, self.n, &self.data)
    }

    pub fn det(&self) -> f64 {
        self.as_nalgebra().determinant()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BasePoints {
    Identity,
    General { z: RealMatrix, w: RealMatrix },
}

/// The ball `{γ ∈ SL(n, Z) : ‖z⁻¹γw‖² ≤ T²}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BallSpec {
    n: usize,
    radius_sq: RadiusSq,
    base: BasePoints,
}

impl BallSpec {
    pub fn identity(n: usize, radius_sq: RadiusSq) -> Result<Self, ExactLatError> {
        if n < 2 {
            return Err(ExactLatError::Dimension(n));
        }
        Ok(Self {
            n,
            radius_sq,
            base: BasePoints::Identity,
        })
    }

    /// Checks shapes and `det z = det w = 1` within each matrix's declared
    /// precision (scaled by `n` for the determinant's sensitivity), with a floor of
    /// `1e-12`.
    pub fn general(radius_sq: RadiusSq, z: RealMatrix, w: RealMatrix) -> Result<Self, ExactLatError> {
        let n = z.n;
        if n < 2 {
            return Err(ExactLatError::Dimension(n));
        }
        if w.n != n {
            return Err(ExactLatError::Shape {
                expected: n,
                got: w.n,
            });
        }
        for (name, m) in [("z", &z), ("w", &w)] {
            let det = m.det();
            let scale = m.data.iter().fold(1.0f64, |a, x| a.max(x.abs())).powi(n as i32 - 1);
            let tol = (n as f64 * m.precision * scale).max(1e-12);
            if (det - 1.0).abs() > tol {
                return Err(ExactLatError::BaseDeterminant {
                    which: name,
                    det,
                });
            }
        }
        Ok(Self {
            n,
            radius_sq,
            base: BasePoints::General { z, w },
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn radius_sq(&self) -> &RadiusSq {
        &self.radius_sq
    }

    pub fn base(&self) -> &BasePoints {
        &self.base
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.base, BasePoints::Identity)
    }

    pub fn with_radius_sq(&self, radius_sq: RadiusSq) -> Self {
        Self {
            radius_sq,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CountMethod {
    RowRecursive,
    GenericForm,
    Naive,
}

impl fmt::Display for CountMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountMethod::RowRecursive => "ROW_RECURSIVE",
            CountMethod::GenericForm => "GENERIC_FORM",
            CountMethod::Naive => "NAIVE",
        })
    }
}

impl FromStr for CountMethod {
    type Err = ExactLatError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().replace('-', "_").as_str() {
            "ROW_RECURSIVE" => Ok(Self::RowRecursive),
            "GENERIC_FORM" => Ok(Self::GenericForm),
            "NAIVE" => Ok(Self::Naive),
            _ => Err(ExactLatError::Parse(format!("unknown count method {s:?}"))),
        }
    }
}

/// One exact count.
#[derive(Debug, Clone, PartialEq)]
pub struct CountRecord {
    pub spec: BallSpec,
    pub count: u64,
    pub method: CountMethod,
    /// Members within the certification margin of the boundary; always 0 for
    /// identity base points.
    pub borderline: u64,
    pub wall_time_seconds: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals() {
        let r: RadiusSq = "9/2".parse().unwrap();
        assert_eq!(r.floor(), BigInt::from(4));
        assert_eq!(r.to_string(), "9/2");
        let r: RadiusSq = "16".parse().unwrap();
        assert_eq!(r.to_string(), "16/1");
        let r: RadiusSq = "6/4".parse().unwrap();
        assert_eq!(r.to_string(), "3/2");
    }

    #[test]
    fn rejects_decimals_and_negatives() {
        assert!("2.5".parse::<RadiusSq>().is_err());
        assert!("-1/2".parse::<RadiusSq>().is_err());
        assert!("1/0".parse::<RadiusSq>().is_err());
        assert!("1/-2".parse::<RadiusSq>().is_err());
    }

    #[test]
    fn general_checks_determinant() {
        let r = RadiusSq::from_integer(2);
        assert!(BallSpec::general(r.clone(), RealMatrix::diag(&[2.0, 0.5]), RealMatrix::identity(2)).is_ok());
        let err = BallSpec::general(r, RealMatrix::diag(&[2.0, 1.0]), RealMatrix::identity(2));
        assert!(matches!(err, Err(ExactLatError::BaseDeterminant { which: "z", .. })));
    }
}
