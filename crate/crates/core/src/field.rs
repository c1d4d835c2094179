//! Exact arithmetic in GF(p^m).
//!
//! A field is fixed by a prime `p`, a degree `m` and a monic irreducible
//! modulus of degree `m` over Z_p. Elements are polynomials of degree `< m`
//! with coefficients in `[0, p)`; each one is identified with its integer
//! code `sum(coeffs[i] * p^i)`, which is also the interchange encoding used by
//! every file format in this crate.
//!
//! For `q <= 256` the addition, multiplication, negation and inversion tables
//! are precomputed; larger fields fall back to polynomial arithmetic.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

const TABLE_LIMIT: u32 = 256;

/// Validated parameters of a finite field.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FieldSpec {
    p: u32,
    m: u32,
    q: u32,
    /// Monic modulus, `m + 1` coefficients, constant term first.
    modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Coefficients of the modulus from the constant term upward, leading 1 included.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {}", self.p, self.m, poly_to_string(&self.modulus))
    }
}

/// An element of GF(q), stored as its integer code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct FieldElement(pub(crate) u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// The integer code `sum(coeffs[i] * p^i)`.
    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

/// A finite field together with whatever lookup tables make it fast.
///
/// Cloning is cheap: the tables are shared.
#[derive(Debug, Clone)]
pub struct Field {
    spec: FieldSpec,
    tables: Option<Arc<Tables>>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for Field {}

impl Field {
    /// Builds GF(p^m). Without an explicit modulus, the smallest monic
    /// irreducible of degree `m` is chosen, comparing coefficient vectors
    /// lexicographically from the constant term upward.
    pub fn new(p: u32, m: u32, modulus: Option<&[u32]>) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if m == 0 {
            return Err(Error::InvalidField("m must be at least 1".into()));
        }
        let q = (p as u64)
            .checked_pow(m)
            .filter(|&q| q <= u32::MAX as u64 / 2)
            .ok_or_else(|| Error::InvalidField(format!("{p}^{m} is too large")))?
            as u32;

        let modulus = match modulus {
            Some(given) => {
                if given.len() != m as usize + 1 || given[m as usize] != 1 {
                    return Err(Error::InvalidField(format!(
                        "modulus must be monic of degree {m}, given {} coefficients {:?}",
                        given.len(),
                        given
                    )));
                }
                if let Some(&c) = given.iter().find(|&&c| c >= p) {
                    return Err(Error::InvalidField(format!("modulus coefficient {c} not below p = {p}")));
                }
                if !is_irreducible(given, p) {
                    return Err(Error::ReducibleModulus(given.to_vec(), p));
                }
                given.to_vec()
            }
            None => smallest_irreducible(p, m),
        };

        let spec = FieldSpec { p, m, q, modulus };
        let mut field = Field { spec, tables: None };
        if q <= TABLE_LIMIT {
            field.tables = Some(Arc::new(field.build_tables()));
        }
        Ok(field)
    }

    /// Shorthand for a prime field.
    pub fn prime(p: u32) -> Result<Field> {
        Field::new(p, 1, None)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn p(&self) -> u32 {
        self.spec.p
    }

    pub fn m(&self) -> u32 {
        self.spec.m
    }

    pub fn q(&self) -> u32 {
        self.spec.q
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// Decodes an integer code, rejecting codes outside `[0, q)`.
    pub fn element(&self, code: u32) -> Result<FieldElement> {
        if code < self.spec.q {
            Ok(FieldElement(code))
        } else {
            Err(Error::ElementOutOfRange { code, q: self.spec.q })
        }
    }

    /// Elements in ascending code order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.spec.q).map(FieldElement)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.spec.q).map(FieldElement)
    }

    /// The element `x` (the class of the indeterminate), or 0 when `m = 1`
    /// would make it a constant.
    pub fn generator_x(&self) -> FieldElement {
        if self.spec.m == 1 {
            FieldElement(0)
        } else {
            FieldElement(self.spec.p)
        }
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        let mut code = a.0;
        let mut out = vec![0; self.spec.m as usize];
        for c in out.iter_mut() {
            *c = code % self.spec.p;
            code /= self.spec.p;
        }
        out
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.spec.m as usize {
            return Err(Error::InvalidField(format!(
                "{} coefficients for a degree-{} extension",
                coeffs.len(),
                self.spec.m
            )));
        }
        let mut code = 0u32;
        for &c in coeffs.iter().rev() {
            if c >= self.spec.p {
                return Err(Error::InvalidField(format!("coefficient {c} not below p = {}", self.spec.p)));
            }
            code = code * self.spec.p + c;
        }
        Ok(FieldElement(code))
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(a.0 < self.spec.q && b.0 < self.spec.q);
        match &self.tables {
            Some(t) => FieldElement(t.add[(a.0 * self.spec.q + b.0) as usize]),
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        match &self.tables {
            Some(t) => FieldElement(t.neg[a.0 as usize]),
            None => self.neg_slow(a),
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(a.0 < self.spec.q && b.0 < self.spec.q);
        match &self.tables {
            Some(t) => FieldElement(t.mul[(a.0 * self.spec.q + b.0) as usize]),
            None => self.mul_slow(a, b),
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(match &self.tables {
            Some(t) => FieldElement(t.inv[a.0 as usize]),
            None => self.pow(a, self.spec.q as u64 - 2),
        })
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^(p^t)`, computed as `t` successive p-th powers.
    pub fn frobenius(&self, a: FieldElement, t: u32) -> Result<FieldElement> {
        if t >= self.spec.m {
            return Err(Error::FrobeniusExponent { t, m: self.spec.m });
        }
        let mut x = a;
        for _ in 0..t {
            x = self.pow(x, self.spec.p as u64);
        }
        Ok(x)
    }

    /// Exponents `t` of the automorphisms `a -> a^(p^t)`; these are all of them.
    pub fn automorphism_exponents(&self) -> Vec<u32> {
        (0..self.spec.m).collect()
    }

    /// The exponent `t'` with `frob_t' = frob_t^{-1}`.
    pub fn inverse_exponent(&self, t: u32) -> u32 {
        (self.spec.m - t % self.spec.m) % self.spec.m
    }

    /// Table mapping each code to its image under `frob_t`.
    pub fn frobenius_table(&self, t: u32) -> Result<Vec<FieldElement>> {
        self.elements().map(|a| self.frobenius(a, t)).collect()
    }

    fn add_slow(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.spec.p;
        let (mut x, mut y) = (a.0, b.0);
        let mut code = 0u32;
        let mut place = 1u32;
        for _ in 0..self.spec.m {
            let c = (x % p + y % p) % p;
            code += c * place;
            x /= p;
            y /= p;
            place = place.wrapping_mul(p);
        }
        FieldElement(code)
    }

    fn neg_slow(&self, a: FieldElement) -> FieldElement {
        let p = self.spec.p;
        let mut x = a.0;
        let mut code = 0u32;
        let mut place = 1u32;
        for _ in 0..self.spec.m {
            let c = (p - x % p) % p;
            code += c * place;
            x /= p;
            place = place.wrapping_mul(p);
        }
        FieldElement(code)
    }

    fn mul_slow(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.spec.p as u64;
        let m = self.spec.m as usize;
        let ca = self.coeffs(a);
        let cb = self.coeffs(b);
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in ca.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // reduce with the monic modulus, highest degree first
        for d in (m..prod.len()).rev() {
            let lead = prod[d];
            if lead == 0 {
                continue;
            }
            for k in 0..m {
                let sub = lead * self.spec.modulus[k] as u64 % p;
                let idx = d - m + k;
                prod[idx] = (prod[idx] + p - sub) % p;
            }
            prod[d] = 0;
        }
        let mut code = 0u64;
        for &c in prod[..m].iter().rev() {
            code = code * p + c;
        }
        FieldElement(code as u32)
    }

    fn build_tables(&self) -> Tables {
        let q = self.spec.q as usize;
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = self.add_slow(FieldElement(a as u32), FieldElement(b as u32)).0;
                mul[a * q + b] = self.mul_slow(FieldElement(a as u32), FieldElement(b as u32)).0;
            }
        }
        let neg = (0..q).map(|a| self.neg_slow(FieldElement(a as u32)).0).collect();
        let mut inv = vec![0; q];
        for a in 1..q {
            inv[a] = (1..q).find(|&b| mul[a * q + b] == 1).expect("field has inverses") as u32;
        }
        Tables { add, mul, neg, inv }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Remainder of `a` modulo the monic `b` over Z_p; coefficients low to high.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let p = p as u64;
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let db = b.len() - 1;
    debug_assert_eq!(b[db], 1);
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (k, &bk) in b.iter().enumerate() {
                let idx = shift + k;
                r[idx] = (r[idx] + p - lead * bk as u64 % p) % p;
            }
        }
        r.pop();
    }
    r.into_iter().map(|c| c as u32).collect()
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-p
/// digits of `index`, constant term as the least significant digit.
fn monic_from_index(mut index: u64, deg: usize, p: u32) -> Vec<u32> {
    let mut out = vec![0; deg + 1];
    for c in out.iter_mut().take(deg) {
        *c = (index % p as u64) as u32;
        index /= p as u64;
    }
    out[deg] = 1;
    out
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for index in 0..count {
            let divisor = monic_from_index(index, d, p);
            if poly_rem(poly, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, m: u32) -> Vec<u32> {
    let m = m as usize;
    if m == 1 {
        return vec![0, 1];
    }
    let total = (p as u64).pow(m as u32);
    // lexicographic from the constant term: c0 is the most significant digit
    for index in 0..total {
        let mut poly = vec![0u32; m + 1];
        let mut rest = index;
        for k in (0..m).rev() {
            poly[k] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        poly[m] = 1;
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over Z_p")
}

pub(crate) fn poly_to_string(coeffs: &[u32]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        terms.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}{mono}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_gf2() {
        let f = Field::new(2, 1, None).unwrap();
        assert_eq!(f.q(), 2);
        assert_eq!(f.add(f.one(), f.one()), f.zero());
        assert_eq!(f.automorphism_exponents(), vec![0]);
    }

    #[test]
    fn gf4_default_modulus_is_x2_x_1() {
        // exhaustive scan of the four monic quadratics over Z_2
        let irreducible: Vec<Vec<u32>> = (0..4u64)
            .map(|i| monic_from_index(i, 2, 2))
            .filter(|poly| (0..2u32).all(|x| (poly[0] + poly[1] * x + x * x) % 2 != 0))
            .collect();
        assert_eq!(irreducible, vec![vec![1, 1, 1]]);
        let f = Field::new(2, 2, None).unwrap();
        assert_eq!(f.spec().modulus(), &[1, 1, 1]);
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^2 + 1 = (x + 1)^2 over Z_2
        assert_eq!(
            Field::new(2, 2, Some(&[1, 0, 1])),
            Err(Error::ReducibleModulus(vec![1, 0, 1], 2))
        );
        assert!(matches!(Field::new(2, 2, Some(&[1, 1])), Err(Error::InvalidField(_))));
        assert!(matches!(Field::new(2, 2, Some(&[1, 1, 2])), Err(Error::InvalidField(_))));
    }

    #[test]
    fn non_prime_rejected() {
        assert_eq!(Field::new(4, 1, None).unwrap_err(), Error::NotPrime(4));
        assert_eq!(Field::new(1, 1, None).unwrap_err(), Error::NotPrime(1));
        assert!(Field::new(2, 0, None).is_err());
    }

    #[test]
    fn gf4_product_x_times_x_plus_1() {
        let f = Field::new(2, 2, None).unwrap();
        let x = f.from_coeffs(&[0, 1]).unwrap();
        let x1 = f.from_coeffs(&[1, 1]).unwrap();
        // x(x+1) = x^2 + x = (x + 1) + x = 1 mod x^2 + x + 1
        assert_eq!(f.mul(x, x1), f.one());
    }

    #[test]
    fn inverse_of_one_and_zero() {
        for (p, m) in [(2, 1), (3, 1), (2, 3), (5, 2)] {
            let f = Field::new(p, m, None).unwrap();
            assert_eq!(f.inv(f.one()).unwrap(), f.one());
            assert_eq!(f.inv(f.zero()), Err(Error::ZeroInverse));
        }
    }

    #[test]
    fn frobenius_gf4() {
        let f = Field::new(2, 2, None).unwrap();
        let x = f.generator_x();
        let x1 = f.from_coeffs(&[1, 1]).unwrap();
        assert_eq!(f.frobenius(x, 1).unwrap(), x1);
        assert_eq!(f.frobenius(x, 0).unwrap(), x);
        assert_eq!(f.frobenius(f.frobenius(x, 1).unwrap(), 1).unwrap(), x);
        assert_eq!(f.frobenius(x, 2), Err(Error::FrobeniusExponent { t: 2, m: 2 }));
    }

    /// Candidate maps a -> a^(p^t) for every t < m that preserve + and *.
    fn brute_force_automorphism_exponents(f: &Field) -> Vec<u32> {
        (0..f.m())
            .filter(|&t| {
                let img = |a: FieldElement| f.pow(a, (f.p() as u64).pow(t));
                f.elements().all(|a| {
                    f.elements().all(|b| {
                        img(f.add(a, b)) == f.add(img(a), img(b)) && img(f.mul(a, b)) == f.mul(img(a), img(b))
                    })
                })
            })
            .collect()
    }

    #[test]
    fn automorphism_lists() {
        for (p, m, expected) in [(2, 1, vec![0]), (2, 2, vec![0, 1]), (2, 3, vec![0, 1, 2])] {
            let f = Field::new(p, m, None).unwrap();
            assert_eq!(f.automorphism_exponents(), expected);
            assert_eq!(brute_force_automorphism_exponents(&f), expected);
        }
    }

    #[test]
    fn frobenius_is_a_ring_homomorphism_up_to_q64() {
        for (p, m) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (2, 4), (5, 2), (2, 5), (2, 6), (3, 3)] {
            let f = Field::new(p, m, None).unwrap();
            for t in f.automorphism_exponents() {
                for a in f.elements() {
                    for b in f.elements() {
                        let fa = f.frobenius(a, t).unwrap();
                        let fb = f.frobenius(b, t).unwrap();
                        assert_eq!(f.frobenius(f.mul(a, b), t).unwrap(), f.mul(fa, fb));
                        assert_eq!(f.frobenius(f.add(a, b), t).unwrap(), f.add(fa, fb));
                    }
                }
            }
        }
    }

    #[test]
    fn field_axioms_up_to_q16() {
        for (p, m) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (11, 1), (13, 1), (2, 4)] {
            let f = Field::new(p, m, None).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), f.zero());
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements() {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn table_and_polynomial_paths_agree() {
        let f = Field::new(3, 3, None).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.add(a, b), f.add_slow(a, b));
                assert_eq!(f.mul(a, b), f.mul_slow(a, b));
            }
        }
    }

    #[test]
    fn large_field_without_tables() {
        let f = Field::new(17, 2, None).unwrap();
        assert!(f.tables.is_none());
        for a in f.nonzero_elements().step_by(7) {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        }
        assert_eq!(f.pow(f.generator_x(), 289), f.generator_x());
    }

    #[test]
    fn code_roundtrip() {
        let f = Field::new(3, 2, None).unwrap();
        for a in f.elements() {
            assert_eq!(f.from_coeffs(&f.coeffs(a)).unwrap(), a);
        }
        assert!(f.element(9).is_err());
    }

    #[test]
    fn default_moduli_are_lexicographically_smallest() {
        // c0 compared first: x^3+x^2+1 = (1,0,1) precedes x^3+x+1 = (1,1,0)
        assert_eq!(Field::new(2, 3, None).unwrap().spec().modulus(), &[1, 0, 1, 1]);
        assert_eq!(Field::new(3, 2, None).unwrap().spec().modulus(), &[1, 0, 1]);
        assert_eq!(Field::new(5, 1, None).unwrap().spec().modulus(), &[0, 1]);
    }
}
