//! Small-rank integer lattice utilities: affine solution lattices of `x·v = 1`,
//! greedy size reduction and Fincke–Pohst enumeration.

use std::ops::RangeInclusive;

/// `(g, s, t)` with `s·a + t·b = g = gcd(a, b) ≥ 0`.
pub(crate) fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

pub(crate) fn gcd_slice(v: &[i64]) -> i64 {
    v.iter().fold(0, |g, &x| ext_gcd(g, x).0)
}

fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

/// Nearest integer to `num / den` for `den > 0`, ties away from zero.
fn round_div(num: i128, den: i128) -> i128 {
    debug_assert!(den > 0);
    let q = (2 * num.abs() + den) / (2 * den);
    if num < 0 {
        -q
    } else {
        q
    }
}

/// The affine lattice `{x ∈ Zⁿ : x·v = 1} = p + L`.
#[derive(Debug, Clone)]
pub(crate) struct AffineLattice {
    pub point: Vec<i64>,
    pub basis: Vec<Vec<i64>>,
}

impl AffineLattice {
    /// Solves `x·v = 1` by a unimodular column completion of `v`.
    /// Returns `None` when `gcd(v) ≠ 1` (including `v = 0`).
    pub fn solve(v: &[i64]) -> Option<Self> {
        let n = v.len();
        // Columns of U; invariant: cur[i] = v · cols[i].
        let mut cols: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut e = vec![0i64; n];
                e[i] = 1;
                e
            })
            .collect();
        let mut cur = v.to_vec();
        for i in 1..n {
            let (a, b) = (cur[0], cur[i]);
            if b == 0 {
                continue;
            }
            let (g, s, t) = ext_gcd(a, b);
            let (bg, ag) = (b / g, a / g);
            let c0: Vec<i64> = (0..n).map(|k| s * cols[0][k] + t * cols[i][k]).collect();
            let ci: Vec<i64> = (0..n).map(|k| -bg * cols[0][k] + ag * cols[i][k]).collect();
            cols[0] = c0;
            cols[i] = ci;
            cur[0] = g;
            cur[i] = 0;
        }
        match cur[0] {
            1 => {}
            -1 => cols[0].iter_mut().for_each(|x| *x = -*x),
            _ => return None,
        }
        let point = cols.remove(0);
        let mut lat = Self {
            point,
            basis: cols,
        };
        size_reduce(&mut lat.basis);
        lat.reduce_point();
        Some(lat)
    }

    fn reduce_point(&mut self) {
        loop {
            let mut changed = false;
            for b in &self.basis {
                let bb = dot(b, b);
                let pb = dot(&self.point, b);
                let q = round_div(pb, bb);
                // strict decrease: ‖p - qb‖² - ‖p‖² = q²bb - 2q·pb < 0
                if q != 0 && q * q * bb < 2 * q * pb {
                    let q = q as i64;
                    for (x, &y) in self.point.iter_mut().zip(b) {
                        *x -= q * y;
                    }
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// Visits every `x = p + Σ yᵢbᵢ` with `‖x‖² ≤ budget`, exactly.
    pub fn for_each_within<F: FnMut(&[i64])>(&self, budget: i64, mut visit: F) {
        if budget < 0 {
            return;
        }
        let m = self.basis.len();
        let n = self.point.len();
        let gram: Vec<f64> = (0..m * m)
            .map(|k| dot(&self.basis[k / m], &self.basis[k % m]) as f64)
            .collect();
        let h: Vec<f64> = self.basis.iter().map(|b| dot(&self.point, b) as f64).collect();
        let Some(chol) = Cholesky::new(&gram, m) else {
            return;
        };
        // Minimizer y* of ‖p + By‖² solves G y* = -h.
        let center = chol.solve(&h.iter().map(|x| -x).collect::<Vec<_>>());
        let pp = dot(&self.point, &self.point) as f64;
        let min_val = pp + h.iter().zip(&center).map(|(a, b)| a * b).sum::<f64>();
        let radius = budget as f64 - min_val;
        let mut x = vec![0i64; n];
        chol.enumerate(&center, radius, None, |y| {
            x.copy_from_slice(&self.point);
            for (yi, b) in y.iter().zip(&self.basis) {
                for k in 0..n {
                    x[k] += yi * b[k];
                }
            }
            if dot(&x, &x) <= budget as i128 {
                visit(&x);
            }
        });
    }

    pub fn count_within(&self, budget: i64) -> u64 {
        let mut c = 0u64;
        self.for_each_within(budget, |_| c += 1);
        c
    }
}

/// Greedy pairwise size reduction: repeatedly subtract the nearest-integer
/// multiple of one basis vector from another while that shortens it.
pub(crate) fn size_reduce(basis: &mut [Vec<i64>]) {
    let m = basis.len();
    loop {
        let mut changed = false;
        basis.sort_by_key(|b| dot(b, b));
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    continue;
                }
                let bj2 = dot(&basis[j], &basis[j]);
                if bj2 == 0 {
                    continue;
                }
                let q = round_div(dot(&basis[i], &basis[j]), bj2);
                if q == 0 {
                    continue;
                }
                let cand: Vec<i64> = basis[i]
                    .iter()
                    .zip(&basis[j])
                    .map(|(&a, &b)| a - q as i64 * b)
                    .collect();
                if dot(&cand, &cand) < dot(&basis[i], &basis[i]) {
                    basis[i] = cand;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
}

/// Cholesky factor `G = RᵀR` of a small positive-definite Gram matrix, stored as
/// squared diagonal `d[i] = R_ii²` and scaled off-diagonals `mu[i][j] = R_ij / R_ii`.
#[derive(Debug, Clone)]
pub(crate) struct Cholesky {
    m: usize,
    d: Vec<f64>,
    mu: Vec<f64>,
}

impl Cholesky {
    pub fn new(gram: &[f64], m: usize) -> Option<Self> {
        let mut r = vec![0.0f64; m * m];
        for i in 0..m {
            for j in i..m {
                let mut s = gram[i * m + j];
                for k in 0..i {
                    s -= r[k * m + i] * r[k * m + j];
                }
                if i == j {
                    if !(s > 0.0) || !s.is_finite() {
                        return None;
                    }
                    r[i * m + i] = s.sqrt();
                } else {
                    r[i * m + j] = s / r[i * m + i];
                }
            }
        }
        let d = (0..m).map(|i| r[i * m + i] * r[i * m + i]).collect();
        let mut mu = vec![0.0; m * m];
        for i in 0..m {
            for j in i + 1..m {
                mu[i * m + j] = r[i * m + j] / r[i * m + i];
            }
        }
        Some(Self { m, d, mu })
    }

    /// Solves `G x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let m = self.m;
        // G = Rᵀ R with R_ij = mu_ij sqrt(d_i), R_ii = sqrt(d_i).
        let rij = |i: usize, j: usize| {
            if i == j {
                self.d[i].sqrt()
            } else {
                self.mu[i * m + j] * self.d[i].sqrt()
            }
        };
        let mut z = vec![0.0; m];
        for i in 0..m {
            let mut s = b[i];
            for k in 0..i {
                s -= rij(k, i) * z[k];
            }
            z[i] = s / rij(i, i);
        }
        let mut x = vec![0.0; m];
        for i in (0..m).rev() {
            let mut s = z[i];
            for k in i + 1..m {
                s -= rij(i, k) * x[k];
            }
            x[i] = s / rij(i, i);
        }
        x
    }

    /// Admissible range of the last coordinate for radius `radius`.
    pub fn top_range(&self, center: &[f64], radius: f64) -> Option<RangeInclusive<i64>> {
        let i = self.m - 1;
        let r = radius * (1.0 + 1e-12) + 1e-9;
        if r < 0.0 {
            return None;
        }
        let w = (r / self.d[i]).sqrt();
        Some(interval(center[i], w))
    }

    /// Visits a superset of `{y : (y-c)ᵀG(y-c) ≤ radius}`, padded by a relative
    /// float margin; callers apply the exact membership test. `top` restricts the
    /// last coordinate.
    pub fn enumerate<F: FnMut(&[i64])>(
        &self,
        center: &[f64],
        radius: f64,
        top: Option<RangeInclusive<i64>>,
        mut visit: F,
    ) {
        let m = self.m;
        if m == 0 {
            return;
        }
        let r = radius * (1.0 + 1e-12) + 1e-9;
        if r < 0.0 {
            return;
        }
        let mut y = vec![0i64; m];
        self.descend(m - 1, r, center, &mut y, top.as_ref(), &mut visit);
    }

    fn descend<F: FnMut(&[i64])>(
        &self,
        i: usize,
        budget: f64,
        center: &[f64],
        y: &mut [i64],
        top: Option<&RangeInclusive<i64>>,
        visit: &mut F,
    ) {
        let m = self.m;
        let mut c = center[i];
        for j in i + 1..m {
            c -= self.mu[i * m + j] * (y[j] as f64 - center[j]);
        }
        let w = (budget.max(0.0) / self.d[i]).sqrt();
        let mut range = interval(c, w);
        if i == m - 1 {
            if let Some(t) = top {
                range = (*range.start()).max(*t.start())..=(*range.end()).min(*t.end());
            }
        }
        for v in range {
            let dv = v as f64 - c;
            let rest = budget - self.d[i] * dv * dv;
            if rest < -1e-9 * (1.0 + budget.abs()) {
                continue;
            }
            y[i] = v;
            if i == 0 {
                visit(y);
            } else {
                self.descend(i - 1, rest, center, y, None, visit);
            }
        }
    }
}

fn interval(c: f64, w: f64) -> RangeInclusive<i64> {
    let pad = 1e-9 * (1.0 + w.abs() + c.abs());
    let lo = (c - w - pad).ceil() as i64;
    let hi = (c + w + pad).floor() as i64;
    lo..=hi
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ext_gcd_identity() {
        for (a, b) in [(240, 46), (-7, 3), (0, 5), (5, 0), (-4, -6), (1, 1)] {
            let (g, s, t) = ext_gcd(a, b);
            assert_eq!(s * a + t * b, g);
            assert!(g >= 0);
        }
        assert_eq!(gcd_slice(&[6, -9, 15]), 3);
        assert_eq!(gcd_slice(&[0, 0]), 0);
    }

    #[test]
    fn solve_produces_unit_dot_and_kernel_basis() {
        for v in [vec![3i64, 5], vec![-6, 10, 15], vec![0, 0, 1], vec![2, 3, 5, 7]] {
            let lat = AffineLattice::solve(&v).unwrap();
            assert_eq!(dot(&lat.point, &v), 1);
            assert_eq!(lat.basis.len(), v.len() - 1);
            for b in &lat.basis {
                assert_eq!(dot(b, &v), 0);
            }
        }
        assert!(AffineLattice::solve(&[2, 4]).is_none());
        assert!(AffineLattice::solve(&[0, 0, 0]).is_none());
    }

    #[test]
    fn affine_count_matches_brute_force() {
        let v = [3i64, -2, 5];
        let lat = AffineLattice::solve(&v).unwrap();
        for budget in [0i64, 1, 2, 5, 14, 30, 77] {
            let mut brute = 0;
            let r = (budget as f64).sqrt() as i64 + 1;
            for a in -r..=r {
                for b in -r..=r {
                    for c in -r..=r {
                        if a * v[0] + b * v[1] + c * v[2] == 1 && a * a + b * b + c * c <= budget {
                            brute += 1;
                        }
                    }
                }
            }
            assert_eq!(lat.count_within(budget), brute, "budget {budget}");
        }
    }

    #[test]
    fn size_reduction_shortens() {
        let mut b = vec![vec![1i64, 0, 0], vec![17, 1, 0]];
        size_reduce(&mut b);
        assert!(b.iter().all(|x| dot(x, x) == 1));
    }

    #[test]
    fn enumerate_unit_disc() {
        let ch = Cholesky::new(&[1.0, 0.0, 0.0, 1.0], 2).unwrap();
        let mut pts = Vec::new();
        ch.enumerate(&[0.0, 0.0], 2.0, None, |y| pts.push(y.to_vec()));
        // superset of the 9 points with |y|² ≤ 2; here exact
        assert_eq!(pts.len(), 9);
    }
}
