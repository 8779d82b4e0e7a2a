//! Case lists for `n = 3, 4`: each case is a type plus a temperedness subcase,
//! and cases with the same bound shape are grouped. A group's bound is
//! `T^{a} δ^{b}` where `a` and `b` may depend affinely on the non-tempered
//! deviation `β ∈ (0, 1/2]`.

use num_rational::Rational64;
use serde::Serialize;

use super::{SpectralType, SpectrumError};

/// `constant + slope·β`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BetaAffine {
    pub constant: Rational64,
    pub slope: Rational64,
}

impl BetaAffine {
    pub fn fixed(c: Rational64) -> Self {
        Self {
            constant: c,
            slope: Rational64::from_integer(0),
        }
    }

    pub fn eval(&self, beta: Rational64) -> Rational64 {
        self.constant + self.slope * beta
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseLabel {
    pub label: &'static str,
    pub ty: SpectralType,
    /// `None` when the type has no cusp-form subcases.
    pub tempered: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseGroup {
    pub name: &'static str,
    pub labels: Vec<&'static str>,
    pub t_exp: BetaAffine,
    pub delta_exp: BetaAffine,
    /// Range `(0, hi]` of `β` when the exponents depend on it.
    pub beta_max: Option<Rational64>,
}

impl CaseGroup {
    /// Exponents at the worst `β` (the right end; both exponents increase in `β`).
    pub fn worst_case(&self) -> (Rational64, Rational64) {
        let b = self.beta_max.unwrap_or_default();
        (self.t_exp.eval(b), self.delta_exp.eval(b))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseTable {
    pub n: usize,
    pub groups: Vec<CaseGroup>,
    /// Exponents of the smoothing error `T^{n(n−1)} δ`.
    pub smoothing: (Rational64, Rational64),
}

fn q(a: i64, b: i64) -> Rational64 {
    Rational64::new(a, b)
}

fn ty(pairs: &[(u32, u32)]) -> SpectralType {
    SpectralType::from_pairs(pairs).expect("static case table")
}

/// The numbered cases for `n = 3, 4`, one entry per subcase.
pub fn case_labels(n: usize) -> Result<Vec<CaseLabel>, SpectrumError> {
    let c = |label, pairs: &[(u32, u32)], tempered| CaseLabel {
        label,
        ty: ty(pairs),
        tempered,
    };
    match n {
        3 => Ok(vec![
            c("1a", &[(3, 3)], Some(true)),
            c("1b", &[(3, 3)], Some(false)),
            c("2a", &[(2, 2), (1, 1)], Some(true)),
            c("2b", &[(2, 2), (1, 1)], Some(false)),
            c("3", &[(2, 1), (1, 1)], None),
            c("4", &[(1, 1), (1, 1), (1, 1)], None),
        ]),
        4 => Ok(vec![
            c("1a", &[(4, 4)], Some(true)),
            c("1b", &[(4, 4)], Some(false)),
            c("1c", &[(4, 4)], Some(false)),
            c("2", &[(4, 2)], None),
            c("3a", &[(3, 3), (1, 1)], Some(true)),
            c("3b", &[(3, 3), (1, 1)], Some(false)),
            c("4", &[(3, 1), (1, 1)], None),
            c("5a", &[(2, 2), (2, 2)], Some(true)),
            c("5b", &[(2, 2), (2, 2)], Some(false)),
            c("5c", &[(2, 2), (2, 2)], Some(false)),
            c("6a", &[(2, 2), (2, 1)], Some(true)),
            c("6b", &[(2, 2), (2, 1)], Some(false)),
            c("7", &[(2, 1), (2, 1)], None),
            c("8a", &[(2, 2), (1, 1), (1, 1)], Some(true)),
            c("8b", &[(2, 2), (1, 1), (1, 1)], Some(false)),
            c("9", &[(2, 1), (1, 1), (1, 1)], None),
            c("10", &[(1, 1), (1, 1), (1, 1), (1, 1)], None),
        ]),
        _ => Err(SpectrumError::CaseTable(n)),
    }
}

/// Grouped bound shapes for `n = 3, 4`.
pub fn case_table(n: usize) -> Result<CaseTable, SpectrumError> {
    let fixed = |name, labels: &[&'static str], a: Rational64, b: Rational64| CaseGroup {
        name,
        labels: labels.to_vec(),
        t_exp: BetaAffine::fixed(a),
        delta_exp: BetaAffine::fixed(b),
        beta_max: None,
    };
    let groups = match n {
        3 => vec![
            fixed("tempered", &["1a", "2a", "4"], q(3, 1), q(-2, 1)),
            fixed("non-tempered", &["1b", "2b", "3"], q(9, 2), q(-1, 2)),
        ],
        4 => vec![
            fixed("tempered", &["1a", "3a", "5a", "6a", "8a", "10"], q(6, 1), q(-4, 1)),
            CaseGroup {
                name: "one non-tempered pair",
                labels: vec!["1b", "3b", "5b", "8b", "9"],
                t_exp: BetaAffine {
                    constant: q(6, 1),
                    slope: q(4, 1),
                },
                delta_exp: BetaAffine {
                    constant: q(-5, 2),
                    slope: q(1, 2),
                },
                beta_max: Some(q(1, 2)),
            },
            fixed("two non-tempered pairs", &["1c", "2", "5c", "6b", "7"], q(8, 1), q(-1, 2)),
            fixed("Epstein", &["4"], q(10, 1), q(0, 1)),
        ],
        _ => return Err(SpectrumError::CaseTable(n)),
    };
    let nn = (n * (n - 1)) as i64;
    Ok(CaseTable {
        n,
        groups,
        smoothing: (q(nn, 1), q(1, 1)),
    })
}
