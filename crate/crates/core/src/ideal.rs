//! Left ideals of M_n(GF(q)).
//!
//! The left ideal `[X] = {WX}` is determined by the row space of `X`, so an
//! ideal is stored as the reduced row echelon basis of that row space. RREF
//! bases are unique, which makes equality and hashing of ideals structural.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::matrix::{Matrix, RowVector};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LeftIdeal {
    n: usize,
    rank: usize,
    /// `rank` rows of length `n`, row-major, in RREF.
    basis: Vec<FieldElement>,
}

impl LeftIdeal {
    /// `[X]`, via the RREF of `X` with its zero rows trimmed.
    pub fn of(x: &Matrix, field: &Field) -> LeftIdeal {
        let (rref, rank) = x.rref(field);
        let n = x.n();
        LeftIdeal { n, rank, basis: rref.entries()[..rank * n].to_vec() }
    }

    /// The ideal whose row space is spanned by `rows` (any number, dependent allowed).
    pub fn from_rows(n: usize, rows: &[RowVector], field: &Field) -> Result<LeftIdeal> {
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!("row length differs from n = {n}")));
        }
        // stack into square blocks of n rows and join
        let mut acc = LeftIdeal::zero(n);
        for chunk in rows.chunks(n.max(1)) {
            let mut padded: Vec<RowVector> = chunk.to_vec();
            padded.resize(n, vec![FieldElement::ZERO; n]);
            for r in &padded {
                for &e in r {
                    field.element(e.code())?;
                }
            }
            let block = LeftIdeal::of(&Matrix::from_rows(&padded)?, field);
            acc = acc.join(&block, field)?;
        }
        Ok(acc)
    }

    pub fn zero(n: usize) -> LeftIdeal {
        LeftIdeal { n, rank: 0, basis: Vec::new() }
    }

    /// The whole ring, row space `GF(q)^n`.
    pub fn whole(n: usize) -> LeftIdeal {
        LeftIdeal { n, rank: n, basis: Matrix::identity(n).entries().to_vec() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Dimension of the ideal as a vector space over GF(q).
    pub fn dimension(&self) -> usize {
        self.n * self.rank
    }

    pub fn basis_row(&self, i: usize) -> &[FieldElement] {
        &self.basis[i * self.n..(i + 1) * self.n]
    }

    pub fn basis_rows(&self) -> impl Iterator<Item = &[FieldElement]> {
        (0..self.rank).map(move |i| self.basis_row(i))
    }

    /// Pivot column of each basis row.
    pub fn pivots(&self) -> Vec<usize> {
        self.basis_rows()
            .map(|row| row.iter().position(|e| !e.is_zero()).expect("basis rows are nonzero"))
            .collect()
    }

    pub fn contains_vector(&self, v: &[FieldElement], field: &Field) -> bool {
        debug_assert_eq!(v.len(), self.n);
        let mut r = v.to_vec();
        for (row, pivot) in self.basis_rows().zip(self.pivots()) {
            let c = r[pivot];
            if c.is_zero() {
                continue;
            }
            for (x, &b) in r.iter_mut().zip(row) {
                *x = field.sub(*x, field.mul(c, b));
            }
        }
        r.iter().all(|e| e.is_zero())
    }

    fn check_same_n(&self, other: &LeftIdeal) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!("ideals of M_{} and M_{}", self.n, other.n)))
        }
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &LeftIdeal, field: &Field) -> Result<bool> {
        self.check_same_n(other)?;
        Ok(self.rank <= other.rank && self.basis_rows().all(|row| other.contains_vector(row, field)))
    }

    /// `self ⊊ other`.
    pub fn proper_subset(&self, other: &LeftIdeal, field: &Field) -> Result<bool> {
        self.check_same_n(other)?;
        Ok(self.rank < other.rank && self.basis_rows().all(|row| other.contains_vector(row, field)))
    }

    /// The sum of two left ideals (span of the union of row spaces).
    pub fn join(&self, other: &LeftIdeal, field: &Field) -> Result<LeftIdeal> {
        self.check_same_n(other)?;
        let n = self.n;
        let mut acc = self.clone();
        for row in other.basis_rows() {
            if acc.contains_vector(row, field) {
                continue;
            }
            let mut m = Matrix::zero(n);
            for (i, r) in acc.basis_rows().chain(std::iter::once(row)).enumerate() {
                for (j, &e) in r.iter().enumerate() {
                    m.set(i, j, e);
                }
            }
            acc = LeftIdeal::of(&m, field);
        }
        Ok(acc)
    }

    /// A single generator: the basis rows on top, zero rows below (`E_Omega`).
    pub fn generator(&self) -> Matrix {
        let mut m = Matrix::zero(self.n);
        for (i, row) in self.basis_rows().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                m.set(i, j, e);
            }
        }
        m
    }

    /// `(r, P)` with `P` invertible and `[E_r P]` equal to this ideal.
    ///
    /// `P` has the basis rows on top, followed by standard vectors chosen
    /// greedily (lowest index first) to complete a basis of `GF(q)^n`.
    pub fn normal_form(&self, field: &Field) -> (usize, Matrix) {
        let n = self.n;
        let mut span = self.clone();
        let mut rows: Vec<RowVector> = self.basis_rows().map(|r| r.to_vec()).collect();
        for k in 0..n {
            if rows.len() == n {
                break;
            }
            let mut e = vec![FieldElement::ZERO; n];
            e[k] = FieldElement::ONE;
            if !span.contains_vector(&e, field) {
                span = span
                    .join(&LeftIdeal { n, rank: 1, basis: e.clone() }, field)
                    .expect("same n");
                rows.push(e);
            }
        }
        let p = Matrix::from_rows(&rows).expect("n rows of length n");
        debug_assert!(p.is_invertible(field));
        (self.rank, p)
    }

    /// For a rank-1 ideal, the unique spanning vector whose first nonzero entry is 1.
    pub fn canonical_rank1_vector(&self) -> Result<RowVector> {
        if self.rank != 1 {
            return Err(Error::WrongRank { expected: 1, got: self.rank });
        }
        Ok(self.basis_row(0).to_vec())
    }

    /// Row codes, one basis row per inner vector.
    pub fn basis_codes(&self) -> Vec<Vec<u32>> {
        self.basis_rows().map(|r| r.iter().map(|e| e.code()).collect()).collect()
    }
}

impl fmt::Display for LeftIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r={} [", self.rank)?;
        for (i, row) in self.basis_rows().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let codes: Vec<String> = row.iter().map(|e| e.code().to_string()).collect();
            write!(f, "{}", codes.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Every left ideal of M_n(GF(q)), i.e. every subspace of `GF(q)^n`.
///
/// Ordered by rank, then by pivot columns (lexicographic), then by the free
/// entries read as a base-q number with the first free position least
/// significant.
pub fn all_ideals(n: usize, field: &Field) -> Vec<LeftIdeal> {
    let mut out = Vec::new();
    for rank in 0..=n {
        for pivots in combinations(n, rank) {
            // free positions: (row i, column j) with j > pivot_i and j not a pivot column
            let free: Vec<(usize, usize)> = (0..rank)
                .flat_map(|i| {
                    let pivots = &pivots;
                    ((pivots[i] + 1)..n).filter(move |j| !pivots.contains(j)).map(move |j| (i, j))
                })
                .collect();
            let q = field.q() as u64;
            let total = q.pow(free.len() as u32);
            for mut code in 0..total {
                let mut basis = vec![FieldElement::ZERO; rank * n];
                for (i, &p) in pivots.iter().enumerate() {
                    basis[i * n + p] = FieldElement::ONE;
                }
                for &(i, j) in &free {
                    basis[i * n + j] = FieldElement((code % q) as u32);
                    code /= q;
                }
                out.push(LeftIdeal { n, rank, basis });
            }
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}
