//! Row-recursive search for identity base points.
//!
//! Every row of a unimodular matrix is primitive, so only primitive vectors are
//! row candidates. Negating the first two rows is a bijection of the member set
//! that flips the sign of the first row, so the search runs over first rows whose
//! leading nonzero entry is positive and doubles the result.

use std::ops::Range;

use super::lattice::{gcd_slice, AffineLattice};
use super::matrix::{det_i64, IntegerMatrix};
use crate::par;
use crate::Execution;

pub(crate) struct RowSearch {
    n: usize,
    budget: i64,
    /// Canonical first rows, lexicographic.
    first: Vec<Vec<i64>>,
    /// All primitive candidates with their squared norms, by increasing norm.
    by_norm: Vec<(i64, Vec<i64>)>,
}

impl RowSearch {
    pub fn new(n: usize, budget: i64) -> Self {
        // each of the n rows needs norm at least 1
        let row_budget = budget - (n as i64 - 1);
        let mut all = Vec::new();
        if row_budget >= 1 {
            let mut x = vec![0i64; n];
            collect_vectors(0, row_budget, &mut x, &mut all);
        }
        all.retain(|v| gcd_slice(v) == 1);
        let mut first: Vec<Vec<i64>> = all
            .iter()
            .filter(|v| v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0))
            .cloned()
            .collect();
        first.sort();
        let mut by_norm: Vec<(i64, Vec<i64>)> = all.into_iter().map(|v| (norm(&v), v)).collect();
        by_norm.sort();
        Self {
            n,
            budget,
            first,
            by_norm,
        }
    }

    pub fn first_rows(&self) -> usize {
        self.first.len()
    }

    /// Number of members whose first row, up to sign, lies in `first[range]`.
    pub fn count(&self, range: Range<usize>, exec: Execution) -> u64 {
        let slice = &self.first[range];
        2 * par::sum_u64(slice, exec, |r1| {
            let mut c = 0u64;
            self.walk(r1, &mut |lat, rest, _| c += lat.count_within(rest));
            c
        })
    }

    pub fn enumerate(&self) -> Vec<IntegerMatrix> {
        let n = self.n;
        let mut out = Vec::new();
        let mut flat = vec![0i64; n * n];
        for r1 in &self.first {
            self.walk(r1, &mut |lat, rest, rows| {
                lat.for_each_within(rest, |last| {
                    for (i, r) in rows.iter().enumerate() {
                        flat[i * n..(i + 1) * n].copy_from_slice(r);
                    }
                    flat[(n - 1) * n..].copy_from_slice(last);
                    out.push(IntegerMatrix::from_i64_flat(n, &flat));
                    flat[..2 * n].iter_mut().for_each(|x| *x = -*x);
                    out.push(IntegerMatrix::from_i64_flat(n, &flat));
                });
            });
        }
        out
    }

    /// Calls `leaf(lattice, remaining_budget, rows)` for every admissible choice
    /// of rows `r₁ = first, r₂, …, r_{n−1}` whose last-row lattice is nonempty.
    fn walk<F: FnMut(&AffineLattice, i64, &[Vec<i64>])>(&self, first: &[i64], leaf: &mut F) {
        let mut rows = vec![first.to_vec()];
        self.descend(&mut rows, norm(first), leaf);
    }

    fn descend<F: FnMut(&AffineLattice, i64, &[Vec<i64>])>(&self, rows: &mut Vec<Vec<i64>>, used: i64, leaf: &mut F) {
        let n = self.n;
        if rows.len() == n - 1 {
            let v = cofactor(n, rows);
            if let Some(lat) = AffineLattice::solve(&v) {
                leaf(&lat, self.budget - used, rows);
            }
            return;
        }
        // rows still to place after this one, each of norm ≥ 1
        let later = (n - 1 - rows.len()) as i64;
        let cap = self.budget - used - later;
        for (nr, r) in &self.by_norm {
            if *nr > cap {
                break;
            }
            rows.push(r.clone());
            if rows.len() == n - 1 || extendable(n, rows) {
                self.descend(rows, used + nr, leaf);
            }
            rows.pop();
        }
    }
}

fn norm(v: &[i64]) -> i64 {
    v.iter().map(|x| x * x).sum()
}

fn collect_vectors(i: usize, budget: i64, x: &mut [i64], out: &mut Vec<Vec<i64>>) {
    if i == x.len() {
        if x.iter().any(|&v| v != 0) {
            out.push(x.to_vec());
        }
        return;
    }
    let r = isqrt(budget);
    for v in -r..=r {
        x[i] = v;
        collect_vectors(i + 1, budget - v * v, x, out);
    }
    x[i] = 0;
}

pub(crate) fn isqrt(b: i64) -> i64 {
    if b <= 0 {
        return 0;
    }
    let mut r = (b as f64).sqrt() as i64;
    while r * r > b {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= b {
        r += 1;
    }
    r
}

/// `v` with `det[r₁; …; r_{n−1}; x] = x·v`.
fn cofactor(n: usize, rows: &[Vec<i64>]) -> Vec<i64> {
    let m = n - 1;
    let mut minor = vec![0i64; m * m];
    (0..n)
        .map(|j| {
            for (i, r) in rows.iter().enumerate() {
                let mut c = 0;
                for (k, &x) in r.iter().enumerate() {
                    if k != j {
                        minor[i * m + c] = x;
                        c += 1;
                    }
                }
            }
            let d = det_i64(m, &minor) as i64;
            if (m + j) % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect()
}

/// Whether the `k` rows extend to a unimodular matrix, i.e. their `k × k` minors
/// are coprime.
fn extendable(n: usize, rows: &[Vec<i64>]) -> bool {
    let k = rows.len();
    let mut cols = Vec::with_capacity(k);
    let mut minor = vec![0i64; k * k];
    let mut g = 0i64;
    // iterate over k-subsets of columns in lexicographic order
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        cols.clear();
        cols.extend_from_slice(&idx);
        for (i, r) in rows.iter().enumerate() {
            for (c, &j) in cols.iter().enumerate() {
                minor[i * k + c] = r[j];
            }
        }
        g = gcd_slice(&[g, det_i64(k, &minor) as i64]);
        if g == 1 {
            return true;
        }
        let Some(p) = (0..k).rev().find(|&p| idx[p] < n - k + p) else {
            return false;
        };
        idx[p] += 1;
        for q in p + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}
