//! Spectral types `E(d, f)` of the `L²` spectrum of `SL(n, Z)\SL(n, R)` and the
//! exponents each type contributes to the error-term analysis.
//!
//! A type is a multiset of blocks `(d_j, f_j)` with `Σ d_j = n` and `f_j | d_j`.
//! Block `j` carries a cusp form on `GL(f_j)` with parameter `μ_j ∈ C^{f_j}`
//! (`μ_j = 0` for `f_j = 1`) and an imaginary shift `s_j`, and contributes the
//! ladder `μ_j + s_j + (d_j/f_j − 1 − 2k)/2`, `k = 0, …, d_j/f_j − 1`.

mod cases;

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sphtrans::{SpectralParameter, SphTransError};

pub use cases::{case_labels, case_table, BetaAffine, CaseGroup, CaseLabel, CaseTable};

/// Tolerance for the linear constraints on block parameters.
const PARAM_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectrumError {
    #[error("dimension must be at least 2, got {0}")]
    Dimension(usize),
    #[error("block ({d}, {f}) is invalid: f must be a positive divisor of d")]
    Block { d: u32, f: u32 },
    #[error("blocks sum to {got}, expected {n}")]
    BlockSum { n: usize, got: usize },
    #[error("expected {expected} block parameters, got {got}")]
    ParamCount { expected: usize, got: usize },
    #[error("block {block}: cusp parameter has length {got}, expected {expected}")]
    ParamShape { block: usize, expected: usize, got: usize },
    #[error("block {block}: cusp parameter sums to {sum}, expected 0")]
    ParamSum { block: usize, sum: Complex64 },
    #[error("shifts violate sum d_j s_j = 0 (got {0})")]
    ShiftSum(f64),
    #[error("case tables exist for n = 3, 4 only, got {0}")]
    CaseTable(usize),
    #[error(transparent)]
    Parameter(#[from] SphTransError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Block {
    pub d: u32,
    pub f: u32,
}

impl Block {
    pub fn new(d: u32, f: u32) -> Result<Self, SpectrumError> {
        if d == 0 || f == 0 || d % f != 0 {
            return Err(SpectrumError::Block { d, f });
        }
        Ok(Self { d, f })
    }

    /// Length `d/f` of the shift ladder.
    pub fn ladder(&self) -> u32 {
        self.d / self.f
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TypeTag {
    /// Single block `(n, 1)`: the constant function.
    Constant,
    /// Single block `(n, n)`: cusp forms.
    Cuspidal,
    /// Single block `(n, f)` with `1 < f < n`.
    Speh,
    /// All blocks `(1, 1)`.
    Minimal,
}

/// Unordered block multiset, stored sorted in decreasing order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SpectralType {
    n: usize,
    blocks: Vec<Block>,
}

impl SpectralType {
    pub fn new(n: usize, mut blocks: Vec<Block>) -> Result<Self, SpectrumError> {
        if n < 2 {
            return Err(SpectrumError::Dimension(n));
        }
        for b in &blocks {
            Block::new(b.d, b.f)?;
        }
        let got: usize = blocks.iter().map(|b| b.d as usize).sum();
        if got != n {
            return Err(SpectrumError::BlockSum { n, got });
        }
        blocks.sort_by(|a, b| b.cmp(a));
        Ok(Self { n, blocks })
    }

    /// From `(d, f)` pairs; `n` is their `d`-sum.
    pub fn from_pairs(pairs: &[(u32, u32)]) -> Result<Self, SpectrumError> {
        let blocks = pairs
            .iter()
            .map(|&(d, f)| Block::new(d, f))
            .collect::<Result<Vec<_>, _>>()?;
        let n = blocks.iter().map(|b| b.d as usize).sum();
        Self::new(n, blocks)
    }

    pub fn constant(n: usize) -> Self {
        Self {
            n,
            blocks: vec![Block { d: n as u32, f: 1 }],
        }
    }

    pub fn cuspidal(n: usize) -> Self {
        Self {
            n,
            blocks: vec![Block { d: n as u32, f: n as u32 }],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Number of blocks `r`.
    pub fn r(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_constant(&self) -> bool {
        self.blocks.len() == 1 && self.blocks[0].f == 1
    }

    pub fn is_cuspidal(&self) -> bool {
        self.blocks.len() == 1 && self.blocks[0].f as usize == self.n
    }

    pub fn tags(&self) -> Vec<TypeTag> {
        let mut tags = Vec::new();
        if self.is_constant() {
            tags.push(TypeTag::Constant);
        }
        if self.is_cuspidal() {
            tags.push(TypeTag::Cuspidal);
        }
        if self.blocks.len() == 1 && !self.is_constant() && !self.is_cuspidal() {
            tags.push(TypeTag::Speh);
        }
        if self.blocks.iter().all(|b| b.d == 1) {
            tags.push(TypeTag::Minimal);
        }
        tags
    }

    pub fn pairs(&self) -> Vec<[u32; 2]> {
        self.blocks.iter().map(|b| [b.d, b.f]).collect()
    }
}

impl fmt::Display for SpectralType {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{{")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(out, ", ")?;
            }
            write!(out, "({}, {})", b.d, b.f)?;
        }
        write!(out, "}}")
    }
}

fn partitions(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if n == 0 {
        out.push(prefix.clone());
        return;
    }
    for part in (1..=max.min(n)).rev() {
        prefix.push(part);
        partitions(n - part, part, prefix, out);
        prefix.pop();
    }
}

fn assign_divisors(parts: &[u32], acc: &mut Vec<Block>, out: &mut BTreeSet<Vec<Block>>) {
    let Some((&d, rest)) = parts.split_first() else {
        let mut blocks = acc.clone();
        blocks.sort_by(|a, b| b.cmp(a));
        out.insert(blocks);
        return;
    };
    for f in (1..=d).filter(|f| d % f == 0) {
        acc.push(Block { d, f });
        assign_divisors(rest, acc, out);
        acc.pop();
    }
}

/// Every type for `n`, as unordered block multisets.
pub fn enumerate_types(n: usize, include_constant: bool) -> Result<Vec<SpectralType>, SpectrumError> {
    if n < 2 {
        return Err(SpectrumError::Dimension(n));
    }
    let mut parts = Vec::new();
    partitions(n as u32, n as u32, &mut Vec::new(), &mut parts);
    let mut set = BTreeSet::new();
    for p in &parts {
        assign_divisors(p, &mut Vec::new(), &mut set);
    }
    Ok(set
        .into_iter()
        .rev()
        .map(|blocks| SpectralType { n, blocks })
        .filter(|t| include_constant || !t.is_constant())
        .collect())
}

fn q(a: i64, b: i64) -> Rational64 {
    Rational64::new(a, b)
}

/// Bound on `‖Re μ‖` from the ladder shifts plus `1/2` for every cuspidal
/// block with `f ≥ 2`.
pub fn re_bound(t: &SpectralType) -> Rational64 {
    t.blocks
        .iter()
        .map(|b| q(b.ladder() as i64 - 1, 2) + if b.f >= 2 { q(1, 2) } else { q(0, 1) })
        .max()
        .unwrap_or_default()
}

/// Number of coinciding unordered pairs forced by the ladders:
/// `½ Σ d_j (d_j/f_j − 1)`.
pub fn coincidence_count(t: &SpectralType) -> Rational64 {
    t.blocks
        .iter()
        .map(|b| q(b.d as i64 * (b.ladder() as i64 - 1), 2))
        .sum()
}

/// `n(n−1)/2 − coincidence_count`.
pub fn supnorm_exponent(t: &SpectralType) -> Rational64 {
    let n = t.n as i64;
    q(n * (n - 1), 2) - coincidence_count(t)
}

/// `½ Σ f_j (f_j − 1)`.
pub fn avg_supnorm_exponent(t: &SpectralType) -> Rational64 {
    t.blocks.iter().map(|b| q(b.f as i64 * (b.f as i64 - 1), 2)).sum()
}

/// `Σ f_j − 1`: a radius-`R` ball in the type's parameter space is covered by
/// `O(R^{cover})` unit balls.
pub fn cover_exponent(t: &SpectralType) -> i64 {
    t.blocks.iter().map(|b| b.f as i64).sum::<i64>() - 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentProfile {
    pub re_max: Rational64,
    pub coincidence: Rational64,
    pub supnorm_exp: Rational64,
    pub avg_supnorm_exp: Rational64,
    pub cover_exp: i64,
}

pub fn profile(t: &SpectralType) -> ExponentProfile {
    ExponentProfile {
        re_max: re_bound(t),
        coincidence: coincidence_count(t),
        supnorm_exp: supnorm_exponent(t),
        avg_supnorm_exp: avg_supnorm_exponent(t),
        cover_exp: cover_exponent(t),
    }
}

/// Flat serializable view of a type and its profile; rationals as `"p/q"`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypeRecord {
    pub n: usize,
    pub blocks: Vec<[u32; 2]>,
    pub tags: Vec<TypeTag>,
    pub re_bound: String,
    pub coincidence: String,
    pub supnorm_exp: String,
    pub avg_supnorm_exp: String,
    pub cover_exp: i64,
}

impl From<&SpectralType> for TypeRecord {
    fn from(t: &SpectralType) -> Self {
        let p = profile(t);
        Self {
            n: t.n,
            blocks: t.pairs(),
            tags: t.tags(),
            re_bound: p.re_max.to_string(),
            coincidence: p.coincidence.to_string(),
            supnorm_exp: p.supnorm_exp.to_string(),
            avg_supnorm_exp: p.avg_supnorm_exp.to_string(),
            cover_exp: p.cover_exp,
        }
    }
}

/// Parameters of one block: the cusp parameter (empty for `f = 1`) and the
/// imaginary part of the shift `s`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BlockParams {
    pub mu: Vec<Complex64>,
    pub s: f64,
}

impl BlockParams {
    pub fn shift(s: f64) -> Self {
        Self { mu: Vec::new(), s }
    }

    pub fn cusp(mu: Vec<Complex64>, s: f64) -> Self {
        Self { mu, s }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralPoint {
    pub ty: SpectralType,
    pub params: Vec<BlockParams>,
    pub assembled: SpectralParameter,
}

/// Assembles the spectral parameter of a type; blocks are taken in the type's
/// canonical (decreasing) order.
pub fn instantiate(t: &SpectralType, params: &[BlockParams]) -> Result<SpectralPoint, SpectrumError> {
    if params.len() != t.blocks.len() {
        return Err(SpectrumError::ParamCount {
            expected: t.blocks.len(),
            got: params.len(),
        });
    }
    let mut shift_sum = 0.0;
    let mut out = Vec::with_capacity(t.n);
    for (j, (b, p)) in t.blocks.iter().zip(params).enumerate() {
        let cusp: Vec<Complex64> = if b.f == 1 {
            match p.mu.as_slice() {
                [] => vec![Complex64::new(0.0, 0.0)],
                [z] if z.norm() <= PARAM_TOL => vec![Complex64::new(0.0, 0.0)],
                other => {
                    return Err(SpectrumError::ParamShape {
                        block: j,
                        expected: 0,
                        got: other.len(),
                    })
                }
            }
        } else {
            if p.mu.len() != b.f as usize {
                return Err(SpectrumError::ParamShape {
                    block: j,
                    expected: b.f as usize,
                    got: p.mu.len(),
                });
            }
            let sum: Complex64 = p.mu.iter().sum();
            if sum.norm() > PARAM_TOL * (1.0 + p.mu.iter().map(|z| z.norm()).fold(0.0, f64::max)) {
                return Err(SpectrumError::ParamSum { block: j, sum });
            }
            p.mu.clone()
        };
        shift_sum += b.d as f64 * p.s;
        let s = Complex64::new(0.0, p.s);
        let m = b.ladder() as i64;
        for k in 0..m {
            let step = (m - 1 - 2 * k) as f64 / 2.0;
            out.extend(cusp.iter().map(|z| z + s + step));
        }
    }
    let scale = 1.0 + params.iter().map(|p| p.s.abs()).fold(0.0, f64::max);
    if shift_sum.abs() > PARAM_TOL * scale * t.n as f64 {
        return Err(SpectrumError::ShiftSum(shift_sum));
    }
    Ok(SpectralPoint {
        ty: t.clone(),
        params: params.to_vec(),
        assembled: SpectralParameter::new(out)?,
    })
}

/// `∏_{i<j} (1 + |μ_i − μ_j|)`.
pub fn supnorm_envelope(mu: &SpectralParameter) -> f64 {
    let m = mu.mu();
    let mut acc = 1.0;
    for i in 0..m.len() {
        for j in i + 1..m.len() {
            acc *= 1.0 + (m[i] - m[j]).norm();
        }
    }
    acc
}
