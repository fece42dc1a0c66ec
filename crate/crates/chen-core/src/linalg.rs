//! Exact linear algebra over the rationals: rank, kernel bases and span
//! membership for sparse matrices. This is the substrate for bar-complex
//! cohomology, so everything here is exact; there is no floating point.
//!
//! Elimination is fraction-free (Bareiss single-step division) on integer rows
//! obtained by clearing denominators, with the pivot in each column chosen by
//! minimal magnitude to limit coefficient growth.

use crate::rational::{self, Rational};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Sparse rational matrix. Zero entries are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Rational>,
}

impl RationalMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, rational::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.entries
            .get(&(r, c))
            .cloned()
            .unwrap_or_else(rational::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Rational)> {
        self.entries.iter()
    }

    /// Build from dense columns (each of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        let mut m = Self::zero(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    m.set(r, c, v.clone());
                }
            }
        }
        m
    }

    fn integer_rows(&self) -> Vec<BTreeMap<usize, BigInt>> {
        let mut out = vec![BTreeMap::new(); self.rows];
        // clear denominators per row
        for r in 0..self.rows {
            let mut denom_lcm = BigInt::from(1);
            for ((rr, _), v) in self.entries.range((r, 0)..(r + 1, 0)) {
                debug_assert_eq!(*rr, r);
                denom_lcm = lcm(&denom_lcm, v.denom());
            }
            for ((_, c), v) in self.entries.range((r, 0)..(r + 1, 0)) {
                let scaled = v.numer() * (&denom_lcm / v.denom());
                out[r].insert(*c, scaled);
            }
        }
        out
    }

    /// Exact rank via fraction-free elimination.
    pub fn rank(&self) -> usize {
        echelon(self.integer_rows()).pivots.len()
    }

    /// Exact basis of the null space; `cols - rank` vectors, each satisfying
    /// `M v = 0`. Deterministic: one vector per free column in column order,
    /// with unit coefficient on the free column.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let ech = echelon(self.integer_rows());
        let pivot_cols: Vec<usize> = ech.pivots.iter().map(|p| p.col).collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![rational::zero(); self.cols];
            v[free] = rational::one();
            // back-substitute pivot rows from the bottom up
            for p in ech.pivots.iter().rev() {
                let row = &ech.rows[p.row];
                let mut s = rational::zero();
                for (c, coef) in row {
                    if *c != p.col && !v[*c].is_zero() {
                        s += Rational::from_integer(coef.clone()) * &v[*c];
                    }
                }
                if !s.is_zero() {
                    let pv = Rational::from_integer(row[&p.col].clone());
                    v[p.col] = -s / pv;
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Apply to a vector of length `cols`.
    pub fn apply(&self, v: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        let mut out = vec![rational::zero(); self.rows];
        for ((r, c), a) in &self.entries {
            if !v[*c].is_zero() {
                out[*r] += a * &v[*c];
            }
        }
        Ok(out)
    }
}

struct Pivot {
    row: usize,
    col: usize,
}

struct Echelon {
    rows: Vec<BTreeMap<usize, BigInt>>,
    pivots: Vec<Pivot>,
}

/// Fraction-free forward elimination on integer rows. Each combination step
/// `row <- pivot*row - row[col]*pivot_row` stays in the integers; rows are
/// divided by the gcd of their entries afterwards to keep coefficients small.
/// Pivot rows are frozen once selected, so they stay reduced with respect to
/// all earlier pivot columns.
fn echelon(mut rows: Vec<BTreeMap<usize, BigInt>>) -> Echelon {
    let ncols = rows
        .iter()
        .filter_map(|r| r.keys().next_back().copied())
        .max()
        .map_or(0, |c| c + 1);
    let mut pivots: Vec<Pivot> = Vec::new();
    let mut used = vec![false; rows.len()];
    for col in 0..ncols {
        // minimal-magnitude pivot among unused rows with a nonzero entry here
        let mut best: Option<usize> = None;
        for (ri, row) in rows.iter().enumerate() {
            if used[ri] {
                continue;
            }
            if let Some(v) = row.get(&col) {
                if !v.is_zero() && best.is_none_or(|b| v.abs() < rows[b][&col].abs()) {
                    best = Some(ri);
                }
            }
        }
        let Some(p) = best else { continue };
        used[p] = true;
        let pivot_row = rows[p].clone();
        let pivot_val = pivot_row[&col].clone();
        for (ri, row) in rows.iter_mut().enumerate() {
            if used[ri] || !row.contains_key(&col) {
                continue;
            }
            let factor = row.remove(&col).unwrap();
            let mut keys: Vec<usize> = row
                .keys()
                .copied()
                .chain(pivot_row.keys().copied())
                .filter(|c| *c != col)
                .collect();
            keys.sort_unstable();
            keys.dedup();
            let mut g = BigInt::zero();
            for c in keys {
                let a = row.get(&c).cloned().unwrap_or_else(BigInt::zero);
                let b = pivot_row.get(&c).cloned().unwrap_or_else(BigInt::zero);
                let v = &pivot_val * a - &factor * b;
                if v.is_zero() {
                    row.remove(&c);
                } else {
                    g = gcd(&g, &v);
                    row.insert(c, v);
                }
            }
            if g > BigInt::from(1) {
                for v in row.values_mut() {
                    *v /= &g;
                }
            }
        }
        pivots.push(Pivot { row: p, col });
    }
    Echelon { rows, pivots }
}

/// Exact span-membership test with certificate: returns `Some(coeffs)` with
/// `v = sum coeffs[i] * basis[i]` when `v` lies in the span, `None` otherwise.
pub fn in_span(
    v: &[Rational],
    basis: &[Vec<Rational>],
) -> Result<Option<Vec<Rational>>, LinalgError> {
    for b in basis {
        if b.len() != v.len() {
            return Err(LinalgError::DimensionMismatch {
                expected: v.len(),
                got: b.len(),
            });
        }
    }
    if basis.is_empty() {
        return Ok(if v.iter().all(|x| x.is_zero()) {
            Some(Vec::new())
        } else {
            None
        });
    }
    // Solve basis^T-as-columns * c = v by augmented elimination over rationals.
    let n = v.len();
    let k = basis.len();
    // rows of [B | v] where B has basis vectors as columns
    let mut rows: Vec<Vec<Rational>> = (0..n)
        .map(|r| {
            let mut row: Vec<Rational> = basis.iter().map(|b| b[r].clone()).collect();
            row.push(v[r].clone());
            row
        })
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; k];
    let mut used = vec![false; n];
    for col in 0..k {
        let mut best: Option<usize> = None;
        for (ri, row) in rows.iter().enumerate() {
            if used[ri] || row[col].is_zero() {
                continue;
            }
            if best.is_none_or(|b: usize| {
                rational::abs_cmp(&row[col], &rows[b][col]).is_lt()
            }) {
                best = Some(ri);
            }
        }
        let Some(p) = best else { continue };
        used[p] = true;
        pivot_of_col[col] = Some(p);
        let pivot_row = rows[p].clone();
        for (ri, row) in rows.iter_mut().enumerate() {
            if ri == p || row[col].is_zero() {
                continue;
            }
            let f = &row[col] / &pivot_row[col];
            for c in col..=k {
                let delta = &f * &pivot_row[c];
                row[c] = &row[c] - &delta;
            }
        }
    }
    // inconsistent if any unused row has nonzero rhs
    for (ri, row) in rows.iter().enumerate() {
        if !used[ri] && !row[k].is_zero() {
            return Ok(None);
        }
    }
    let mut coeffs = vec![rational::zero(); k];
    for col in 0..k {
        if let Some(p) = pivot_of_col[col] {
            coeffs[col] = &rows[p][k] / &rows[p][col];
        }
    }
    Ok(Some(coeffs))
}

fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    (a * b).abs() / gcd(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::from_i64 as q;
    use proptest::prelude::*;

    fn mat(rows: usize, cols: usize, data: &[(usize, usize, i64)]) -> RationalMatrix {
        let mut m = RationalMatrix::zero(rows, cols);
        for (r, c, v) in data {
            m.set(*r, *c, q(*v));
        }
        m
    }

    #[test]
    fn rank_basics() {
        assert_eq!(RationalMatrix::identity(2).rank(), 2);
        assert_eq!(RationalMatrix::zero(3, 4).rank(), 0);
        let m = mat(2, 3, &[(0, 0, 1), (0, 1, 2), (1, 0, 2), (1, 1, 4), (1, 2, 1)]);
        assert_eq!(m.rank(), 2);
        let m = mat(2, 2, &[(0, 0, 1), (0, 1, 2), (1, 0, 2), (1, 1, 4)]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_basics() {
        assert!(RationalMatrix::identity(3).kernel_basis().is_empty());
        let z = RationalMatrix::zero(3, 3);
        let k = z.kernel_basis();
        assert_eq!(k.len(), 3);
        for (i, v) in k.iter().enumerate() {
            for (j, x) in v.iter().enumerate() {
                assert_eq!(*x == q(1), i == j);
            }
        }
        let m = mat(1, 3, &[(0, 0, 1), (0, 1, 1), (0, 2, 1)]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.apply(v).unwrap().iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn in_span_basics() {
        let v = vec![q(1), q(2)];
        assert!(in_span(&v, &[v.clone()]).unwrap().is_some());
        let e1 = vec![q(1), q(0)];
        let e2 = vec![q(0), q(1)];
        assert!(in_span(&e1, &[e2.clone()]).unwrap().is_none());
        let c = in_span(&vec![q(3), q(5)], &[e1, e2]).unwrap().unwrap();
        assert_eq!(c, vec![q(3), q(5)]);
        assert!(in_span(&vec![q(1)], &[vec![q(1), q(2)]]).is_err());
        // zero vector is in the empty span
        assert!(in_span(&vec![q(0), q(0)], &[]).unwrap().is_some());
    }

    #[test]
    fn in_span_consistent_with_rank() {
        let basis = vec![vec![q(1), q(2), q(3)], vec![q(0), q(1), q(1)]];
        let inside = vec![q(2), q(5), q(7)];
        let outside = vec![q(0), q(0), q(1)];
        let rank_b = RationalMatrix::from_columns(3, &basis).rank();
        for (v, expect) in [(inside, true), (outside, false)] {
            let mut cols = basis.clone();
            cols.push(v.clone());
            let aug = RationalMatrix::from_columns(3, &cols).rank();
            assert_eq!(aug == rank_b, expect);
            assert_eq!(in_span(&v, &basis).unwrap().is_some(), expect);
        }
    }

    proptest! {
        #[test]
        fn rank_plus_nullity(entries in proptest::collection::vec(
            (0usize..6, 0usize..7, -5i64..=5), 0..18)) {
            let mut m = RationalMatrix::zero(6, 7);
            for (r, c, v) in entries {
                m.set(r, c, q(v));
            }
            let rank = m.rank();
            let kernel = m.kernel_basis();
            prop_assert_eq!(rank + kernel.len(), 7);
            for v in &kernel {
                prop_assert!(m.apply(v).unwrap().iter().all(|x| x.is_zero()));
            }
        }

        #[test]
        fn in_span_certificate_is_exact(
            cols in proptest::collection::vec(
                proptest::collection::vec(-4i64..=4, 4), 1..4),
            combo in proptest::collection::vec(-3i64..=3, 1..4),
        ) {
            let basis: Vec<Vec<Rational>> = cols.iter()
                .map(|c| c.iter().map(|v| q(*v)).collect())
                .collect();
            let mut v = vec![q(0); 4];
            for (b, co) in basis.iter().zip(combo.iter()) {
                for (i, x) in b.iter().enumerate() {
                    v[i] += x * q(*co);
                }
            }
            let cert = in_span(&v, &basis).unwrap();
            prop_assert!(cert.is_some());
            let cert = cert.unwrap();
            let mut rec = vec![q(0); 4];
            for (b, co) in basis.iter().zip(cert.iter()) {
                for (i, x) in b.iter().enumerate() {
                    rec[i] += x * co;
                }
            }
            prop_assert_eq!(rec, v);
        }
    }
}
