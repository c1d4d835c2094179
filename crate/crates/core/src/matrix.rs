//! Square matrices over GF(q).
//!
//! Indices are 0-based in this API. The named matrices of the construction
//! (`E_{s,t}`, `E(i,j)`, `E(i(a))`, `E_r`, `E_a`, `E_Omega`, `E_1`) are built via
//! [`Elementary`]; user-facing text elsewhere prints indices 1-based.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};

/// A row vector of length `n`.
pub type RowVector = Vec<FieldElement>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    n: usize,
    entries: Vec<FieldElement>,
}

/// The named matrices used throughout the automorphism construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Elementary {
    /// `E_{s,t}`: a single 1 at `(s, t)`.
    Unit { s: usize, t: usize },
    /// `E(i,j)`: identity with columns `i` and `j` swapped.
    Swap { i: usize, j: usize },
    /// `E(i(a))`: identity with column `i` scaled by `a != 0`.
    Scale { i: usize, a: FieldElement },
    /// `E_r`: ones on the first `r` diagonal positions; `E_0 = 0`.
    RankMarker(usize),
    /// `E_a`: first row `a`, remaining rows zero.
    FirstRow(RowVector),
    /// `E_Omega`: the independent rows of `Omega` on top, zero rows below.
    Stacked(Vec<RowVector>),
    /// `E_1`: the all-one vector as first row.
    AllOneFirstRow,
}

impl Matrix {
    pub fn zero(n: usize) -> Matrix {
        Matrix { n, entries: vec![FieldElement::ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = FieldElement::ONE;
        }
        m
    }

    pub fn from_rows(rows: &[RowVector]) -> Result<Matrix> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!("{n} rows of unequal or non-square length")));
        }
        Ok(Matrix { n, entries: rows.concat() })
    }

    /// Builds a matrix from row-major element codes.
    pub fn from_codes(n: usize, field: &Field, codes: &[u32]) -> Result<Matrix> {
        if codes.len() != n * n {
            return Err(Error::DimensionMismatch(format!("expected {} entries, got {}", n * n, codes.len())));
        }
        let entries = codes.iter().map(|&c| field.element(c)).collect::<Result<_>>()?;
        Ok(Matrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: FieldElement) {
        self.entries[i * self.n + j] = value;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[FieldElement]> {
        self.entries.chunks(self.n.max(1)).take(self.n)
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn codes(&self) -> Vec<u32> {
        self.entries.iter().map(|e| e.code()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn map_entries(&self, mut f: impl FnMut(FieldElement) -> FieldElement) -> Matrix {
        Matrix { n: self.n, entries: self.entries.iter().map(|&e| f(e)).collect() }
    }

    pub fn mul(&self, other: &Matrix, field: &Field) -> Result<Matrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!("{}x{} times {}x{}", self.n, self.n, other.n, other.n)));
        }
        Ok(self.mul_unchecked(other, field))
    }

    pub(crate) fn mul_unchecked(&self, other: &Matrix, field: &Field) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let idx = i * n + j;
                    out.entries[idx] = field.add(out.entries[idx], field.mul(a, other.entries[k * n + j]));
                }
            }
        }
        out
    }

    /// `v * self` for a row vector `v`.
    pub fn left_apply(&self, v: &[FieldElement], field: &Field) -> RowVector {
        let n = self.n;
        let mut out = vec![FieldElement::ZERO; n];
        for (k, &a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for j in 0..n {
                out[j] = field.add(out[j], field.mul(a, self.entries[k * n + j]));
            }
        }
        out
    }

    /// Reduced row echelon form and rank.
    ///
    /// Columns are scanned left to right; in each, the topmost nonzero entry at
    /// or below the current pivot row becomes the pivot, is scaled to 1 and
    /// cleared from every other row.
    pub fn rref(&self, field: &Field) -> (Matrix, usize) {
        let n = self.n;
        let mut m = self.clone();
        let mut pivot_row = 0;
        for col in 0..n {
            if pivot_row == n {
                break;
            }
            let Some(found) = (pivot_row..n).find(|&r| !m.entries[r * n + col].is_zero()) else {
                continue;
            };
            if found != pivot_row {
                for j in 0..n {
                    m.entries.swap(found * n + j, pivot_row * n + j);
                }
            }
            let inv = field.inv(m.entries[pivot_row * n + col]).expect("pivot is nonzero");
            for j in 0..n {
                let idx = pivot_row * n + j;
                m.entries[idx] = field.mul(inv, m.entries[idx]);
            }
            for r in 0..n {
                if r == pivot_row {
                    continue;
                }
                let factor = m.entries[r * n + col];
                if factor.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let sub = field.mul(factor, m.entries[pivot_row * n + j]);
                    m.entries[r * n + j] = field.sub(m.entries[r * n + j], sub);
                }
            }
            pivot_row += 1;
        }
        (m, pivot_row)
    }

    pub fn rank(&self, field: &Field) -> usize {
        self.rref(field).1
    }

    pub fn is_invertible(&self, field: &Field) -> bool {
        self.rank(field) == self.n
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self, field: &Field) -> Result<Matrix> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return Err(Error::Singular);
            };
            for j in 0..n {
                a.entries.swap(piv * n + j, col * n + j);
                inv.entries.swap(piv * n + j, col * n + j);
            }
            let s = field.inv(a.get(col, col))?;
            for j in 0..n {
                a.entries[col * n + j] = field.mul(s, a.entries[col * n + j]);
                inv.entries[col * n + j] = field.mul(s, inv.entries[col * n + j]);
            }
            for r in 0..n {
                let factor = a.get(r, col);
                if r == col || factor.is_zero() {
                    continue;
                }
                for j in 0..n {
                    a.entries[r * n + j] = field.sub(a.entries[r * n + j], field.mul(factor, a.entries[col * n + j]));
                    inv.entries[r * n + j] =
                        field.sub(inv.entries[r * n + j], field.mul(factor, inv.entries[col * n + j]));
                }
            }
        }
        Ok(inv)
    }

    pub fn elementary(kind: &Elementary, n: usize, field: &Field) -> Result<Matrix> {
        let check = |idx: usize, name: &str| {
            if idx < n {
                Ok(())
            } else {
                Err(Error::IndexOutOfRange(format!("{name} = {idx} with n = {n} (0-based)")))
            }
        };
        match kind {
            Elementary::Unit { s, t } => {
                check(*s, "s")?;
                check(*t, "t")?;
                let mut m = Matrix::zero(n);
                m.set(*s, *t, FieldElement::ONE);
                Ok(m)
            }
            Elementary::Swap { i, j } => {
                check(*i, "i")?;
                check(*j, "j")?;
                let mut m = Matrix::identity(n);
                m.set(*i, *i, FieldElement::ZERO);
                m.set(*j, *j, FieldElement::ZERO);
                m.set(*i, *j, FieldElement::ONE);
                m.set(*j, *i, FieldElement::ONE);
                Ok(m)
            }
            Elementary::Scale { i, a } => {
                check(*i, "i")?;
                if a.is_zero() {
                    return Err(Error::Precondition("scale factor must be nonzero".into()));
                }
                field.element(a.code())?;
                let mut m = Matrix::identity(n);
                m.set(*i, *i, *a);
                Ok(m)
            }
            Elementary::RankMarker(r) => {
                if *r > n {
                    return Err(Error::IndexOutOfRange(format!("r = {r} exceeds n = {n}")));
                }
                let mut m = Matrix::zero(n);
                for i in 0..*r {
                    m.set(i, i, FieldElement::ONE);
                }
                Ok(m)
            }
            Elementary::FirstRow(a) => Matrix::elementary(&Elementary::Stacked(vec![a.clone()]), n, field),
            Elementary::Stacked(rows) => {
                if rows.len() > n || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::DimensionMismatch(format!("{} rows for n = {n}", rows.len())));
                }
                let mut m = Matrix::zero(n);
                for (i, row) in rows.iter().enumerate() {
                    for (j, &e) in row.iter().enumerate() {
                        m.set(i, j, field.element(e.code())?);
                    }
                }
                if m.rank(field) != rows.len() {
                    return Err(Error::DependentRows);
                }
                Ok(m)
            }
            Elementary::AllOneFirstRow => {
                Matrix::elementary(&Elementary::FirstRow(vec![FieldElement::ONE; n]), n, field)
            }
        }
    }

    /// Vertex index: `sum_k code(entry_k) * q^k` over row-major positions `k`.
    pub fn encode(&self, field: &Field) -> Result<u64> {
        let q = field.q() as u64;
        let mut v = 0u64;
        for e in self.entries.iter().rev() {
            v = v
                .checked_mul(q)
                .and_then(|v| v.checked_add(e.code() as u64))
                .ok_or_else(|| Error::InvalidField(format!("q^(n^2) overflows 64 bits for n = {}", self.n)))?;
        }
        Ok(v)
    }

    #[inline]
    pub(crate) fn encode_unchecked(&self, q: u32) -> usize {
        let mut v = 0usize;
        for e in self.entries.iter().rev() {
            v = v * q as usize + e.code() as usize;
        }
        v
    }

    pub fn decode(v: u64, n: usize, field: &Field) -> Result<Matrix> {
        let count = matrix_count(n, field)?;
        if (v as u128) >= count {
            return Err(Error::VertexOutOfRange { v, count: count.min(u64::MAX as u128) as u64 });
        }
        Ok(Matrix::decode_unchecked(v as usize, n, field.q()))
    }

    #[inline]
    pub(crate) fn decode_unchecked(mut v: usize, n: usize, q: u32) -> Matrix {
        let mut entries = Vec::with_capacity(n * n);
        for _ in 0..n * n {
            entries.push(FieldElement((v % q as usize) as u32));
            v /= q as usize;
        }
        Matrix { n, entries }
    }
}

/// `q^(n^2)` as an exact integer.
pub fn matrix_count(n: usize, field: &Field) -> Result<u128> {
    (field.q() as u128)
        .checked_pow((n * n) as u32)
        .ok_or_else(|| Error::InvalidField(format!("q^(n^2) overflows for n = {n}, q = {}", field.q())))
}

/// Rejects `q^(n^2) > cap`.
pub fn check_cap(n: usize, field: &Field, cap: u64) -> Result<usize> {
    let count = matrix_count(n, field).unwrap_or(u128::MAX);
    if count > cap as u128 {
        return Err(Error::CapExceeded { what: format!("M_{n}(GF({}))", field.q()), count, cap });
    }
    Ok(count as usize)
}

/// Every matrix, in ascending vertex-index order.
pub fn enumerate_matrices(n: usize, field: &Field, cap: u64) -> Result<impl Iterator<Item = Matrix>> {
    let count = check_cap(n, field, cap)?;
    let q = field.q();
    Ok((0..count).map(move |v| Matrix::decode_unchecked(v, n, q)))
}

/// Uniform element of GL(n, q) by rejection sampling; also returns the number of draws.
pub fn random_invertible_counted<R: Rng + ?Sized>(n: usize, field: &Field, rng: &mut R) -> (Matrix, usize) {
    let mut attempts = 0;
    loop {
        attempts += 1;
        let codes: Vec<u32> = (0..n * n).map(|_| rng.random_range(0..field.q())).collect();
        let m = Matrix::from_codes(n, field, &codes).expect("codes are in range");
        if m.is_invertible(field) {
            return (m, attempts);
        }
    }
}

pub fn random_invertible<R: Rng + ?Sized>(n: usize, field: &Field, rng: &mut R) -> Matrix {
    random_invertible_counted(n, field, rng).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeded_rng;

    fn gf2() -> Field {
        Field::prime(2).unwrap()
    }

    fn m(f: &Field, n: usize, codes: &[u32]) -> Matrix {
        Matrix::from_codes(n, f, codes).unwrap()
    }

    #[test]
    fn products() {
        let f = gf2();
        let x = m(&f, 2, &[1, 0, 1, 1]);
        assert_eq!(Matrix::identity(2).mul(&x, &f).unwrap(), x);
        let e12 = Matrix::elementary(&Elementary::Unit { s: 0, t: 1 }, 2, &f).unwrap();
        let e21 = Matrix::elementary(&Elementary::Unit { s: 1, t: 0 }, 2, &f).unwrap();
        let e11 = Matrix::elementary(&Elementary::Unit { s: 0, t: 0 }, 2, &f).unwrap();
        assert_eq!(e12.mul(&e21, &f).unwrap(), e11);
        let a = m(&f, 2, &[1, 1, 0, 1]);
        assert_eq!(a.mul(&a, &f).unwrap(), Matrix::identity(2));
        assert!(a.mul(&Matrix::identity(3), &f).is_err());
    }

    #[test]
    fn rref_examples() {
        let f = gf2();
        assert_eq!(Matrix::zero(2).rref(&f), (Matrix::zero(2), 0));
        assert_eq!(Matrix::identity(3).rref(&f), (Matrix::identity(3), 3));
        assert_eq!(m(&f, 2, &[1, 1, 1, 1]).rref(&f), (m(&f, 2, &[1, 1, 0, 0]), 1));
        let f3 = Field::prime(3).unwrap();
        // [[0,2],[2,1]] -> swap, scale, clear
        assert_eq!(m(&f3, 2, &[0, 2, 2, 1]).rref(&f3), (Matrix::identity(2), 2));
    }

    #[test]
    fn elementary_examples() {
        let f = gf2();
        assert_eq!(Matrix::elementary(&Elementary::RankMarker(0), 3, &f).unwrap(), Matrix::zero(3));
        assert_eq!(Matrix::elementary(&Elementary::Swap { i: 0, j: 1 }, 2, &f).unwrap(), m(&f, 2, &[0, 1, 1, 0]));
        let one = FieldElement::ONE;
        assert_eq!(
            Matrix::elementary(&Elementary::FirstRow(vec![one, one]), 2, &f).unwrap(),
            m(&f, 2, &[1, 1, 0, 0])
        );
        assert_eq!(Matrix::elementary(&Elementary::AllOneFirstRow, 2, &f).unwrap(), m(&f, 2, &[1, 1, 0, 0]));
        for r in 0..=3 {
            let er = Matrix::elementary(&Elementary::RankMarker(r), 3, &f).unwrap();
            assert_eq!(er.rank(&f), r);
        }
        assert!(Matrix::elementary(&Elementary::Unit { s: 2, t: 0 }, 2, &f).is_err());
        assert!(Matrix::elementary(&Elementary::Scale { i: 0, a: FieldElement::ZERO }, 2, &f).is_err());
        let zero = FieldElement::ZERO;
        assert_eq!(
            Matrix::elementary(&Elementary::Stacked(vec![vec![one, zero], vec![one, zero]]), 2, &f),
            Err(Error::DependentRows)
        );
    }

    #[test]
    fn swap_and_scale_are_invertible() {
        let f = Field::new(2, 2, None).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!(Matrix::elementary(&Elementary::Swap { i, j }, 3, &f).unwrap().is_invertible(&f));
            }
            for a in f.nonzero_elements() {
                assert!(Matrix::elementary(&Elementary::Scale { i, a }, 3, &f).unwrap().is_invertible(&f));
            }
        }
    }

    #[test]
    fn invertibility() {
        let f = gf2();
        assert!(Matrix::identity(2).is_invertible(&f));
        assert!(!Matrix::zero(2).is_invertible(&f));
        assert!(!m(&f, 2, &[1, 1, 1, 1]).is_invertible(&f));
    }

    #[test]
    fn inverse_exhaustive_gl_2_3() {
        let f = Field::prime(3).unwrap();
        for x in enumerate_matrices(2, &f, 100).unwrap() {
            match x.inverse(&f) {
                Ok(inv) => assert_eq!(x.mul(&inv, &f).unwrap(), Matrix::identity(2)),
                Err(e) => {
                    assert_eq!(e, Error::Singular);
                    assert!(!x.is_invertible(&f));
                }
            }
        }
    }

    #[test]
    fn vertex_encoding() {
        let f = gf2();
        assert_eq!(Matrix::zero(2).encode(&f).unwrap(), 0);
        let e11 = Matrix::elementary(&Elementary::Unit { s: 0, t: 0 }, 2, &f).unwrap();
        assert_eq!(e11.encode(&f).unwrap(), 1);
        assert_eq!(Matrix::identity(2).encode(&f).unwrap(), 9);
        assert!(Matrix::decode(16, 2, &f).is_err());
        for v in 0..16 {
            assert_eq!(Matrix::decode(v, 2, &f).unwrap().encode(&f).unwrap(), v);
        }
    }

    #[test]
    fn enumeration_counts() {
        let f2 = gf2();
        let f3 = Field::prime(3).unwrap();
        assert_eq!(enumerate_matrices(2, &f2, 100_000).unwrap().count(), 16);
        assert_eq!(enumerate_matrices(1, &f3, 100_000).unwrap().count(), 3);
        let all: Vec<Matrix> = enumerate_matrices(3, &f2, 100_000).unwrap().collect();
        assert_eq!(all.len(), 512);
        for (v, x) in all.iter().enumerate() {
            assert_eq!(x.encode(&f2).unwrap(), v as u64);
        }
        assert!(matches!(enumerate_matrices(4, &f3, 100_000), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn random_invertible_is_deterministic_and_invertible() {
        let f = gf2();
        let a = random_invertible(3, &f, &mut seeded_rng(7));
        let b = random_invertible(3, &f, &mut seeded_rng(7));
        assert_eq!(a, b);
        assert!(a.is_invertible(&f));
    }

    #[test]
    fn rejection_rate_matches_gl_2_2() {
        // |GL(2,2)| = 6 of 16 matrices, acceptance rate 0.375
        let f = gf2();
        let gl = enumerate_matrices(2, &f, 100).unwrap().filter(|x| x.is_invertible(&f)).count();
        assert_eq!(gl, 6);
        let mut rng = seeded_rng(1);
        let samples = 4000;
        let draws: usize = (0..samples).map(|_| random_invertible_counted(2, &f, &mut rng).1).sum();
        let rate = samples as f64 / draws as f64;
        assert!((rate - 0.375).abs() < 0.02, "acceptance rate {rate}");
    }

    #[test]
    fn rank_of_product_bounded() {
        let f = gf2();
        let all: Vec<Matrix> = enumerate_matrices(2, &f, 100).unwrap().collect();
        for a in &all {
            for b in &all {
                let r = a.mul(b, &f).unwrap().rank(&f);
                assert!(r <= a.rank(&f).min(b.rank(&f)));
            }
        }
    }

    #[test]
    fn rank_invariant_under_invertible_right_factor() {
        let f = gf2();
        let all: Vec<Matrix> = enumerate_matrices(2, &f, 100).unwrap().collect();
        for p in all.iter().filter(|p| p.is_invertible(&f)) {
            for x in &all {
                assert_eq!(x.mul(p, &f).unwrap().rank(&f), x.rank(&f));
            }
        }
        let mut rng = seeded_rng(3);
        for x in enumerate_matrices(3, &f, 1000).unwrap().step_by(5) {
            let p = random_invertible(3, &f, &mut rng);
            assert_eq!(x.mul(&p, &f).unwrap().rank(&f), x.rank(&f));
        }
    }
}
