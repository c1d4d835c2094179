//! Closed-form counts for M_n(GF(q)), all as exact big integers.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

fn check_rank(n: usize, r: usize) -> Result<()> {
    if r <= n {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange(format!("rank {r} exceeds n = {n}")))
    }
}

fn pow(q: u64, e: usize) -> BigUint {
    BigUint::from(q).pow(e as u32)
}

/// Number of `r`-dimensional subspaces of `GF(q)^n`.
///
/// Accumulated as `[n, i+1]_q = [n, i]_q (q^(n-i) - 1) / (q^(i+1) - 1)`, each
/// division exact.
pub fn gaussian_binomial(n: usize, r: usize, q: u64) -> Result<BigUint> {
    check_rank(n, r)?;
    let mut acc = BigUint::one();
    for i in 0..r {
        acc *= pow(q, n - i) - 1u32;
        acc /= pow(q, i + 1) - 1u32;
    }
    Ok(acc)
}

/// Number of matrices whose row space is one fixed `r`-dimensional subspace:
/// `prod_{j<r} (q^n - q^j)`.
pub fn fiber_size(n: usize, r: usize, q: u64) -> Result<BigUint> {
    check_rank(n, r)?;
    Ok((0..r).fold(BigUint::one(), |acc, j| acc * (pow(q, n) - pow(q, j))))
}

/// Number of `n x n` matrices of rank exactly `r`.
pub fn rank_class_size(n: usize, r: usize, q: u64) -> Result<BigUint> {
    Ok(gaussian_binomial(n, r, q)? * fiber_size(n, r, q)?)
}

/// `|GL(n, q)| = M(n, n, n, q)`.
pub fn gl_order(n: usize, q: u64) -> BigUint {
    fiber_size(n, n, q).expect("r = n is in range")
}

/// `|PGL(n, q)| = |GL(n, q)| / (q - 1)`.
pub fn pgl_order(n: usize, q: u64) -> BigUint {
    gl_order(n, q) / (q - 1)
}

pub fn matrix_count(n: usize, q: u64) -> BigUint {
    pow(q, n * n)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredictedDegree {
    pub in_degree: BigUint,
    pub out_degree: BigUint,
    pub undirected: BigUint,
}

/// Degrees of a rank-`r` vertex in the relation graph.
///
/// In-neighbors are the matrices whose row space is a proper subspace of a
/// fixed `r`-space: `sum_{s<r} [r, s]_q * fiber(s)`. Out-neighbors are those
/// whose row space properly contains it: `sum_{s>r} [n-r, s-r]_q * fiber(s)`.
pub fn predicted_degree(n: usize, r: usize, q: u64) -> Result<PredictedDegree> {
    check_rank(n, r)?;
    let mut in_degree = BigUint::zero();
    for s in 0..r {
        in_degree += gaussian_binomial(r, s, q)? * fiber_size(n, s, q)?;
    }
    let mut out_degree = BigUint::zero();
    for s in (r + 1)..=n {
        out_degree += gaussian_binomial(n - r, s - r, q)? * fiber_size(n, s, q)?;
    }
    let undirected = &in_degree + &out_degree;
    Ok(PredictedDegree { in_degree, out_degree, undirected })
}

/// Per-rank counting table for M_n(GF(q)).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub n: usize,
    pub q: u64,
    pub subspace_counts: Vec<BigUint>,
    pub fiber_sizes: Vec<BigUint>,
    pub rank_class_sizes: Vec<BigUint>,
    pub degrees: Vec<PredictedDegree>,
    pub gl_order: BigUint,
    pub matrix_count: BigUint,
}

impl CountReport {
    pub fn new(n: usize, q: u64) -> CountReport {
        let ranks = 0..=n;
        let subspace_counts = ranks.clone().map(|r| gaussian_binomial(n, r, q).unwrap()).collect();
        let fiber_sizes = ranks.clone().map(|r| fiber_size(n, r, q).unwrap()).collect();
        let rank_class_sizes = ranks.clone().map(|r| rank_class_size(n, r, q).unwrap()).collect();
        let degrees = ranks.map(|r| predicted_degree(n, r, q).unwrap()).collect();
        CountReport {
            n,
            q,
            subspace_counts,
            fiber_sizes,
            rank_class_sizes,
            degrees,
            gl_order: gl_order(n, q),
            matrix_count: matrix_count(n, q),
        }
    }

    pub fn quotient_vertex_count(&self) -> BigUint {
        self.subspace_counts.iter().sum()
    }

    /// `sum_r subspaces(r) * fiber(r) == q^(n^2)`.
    pub fn total_matches(&self) -> bool {
        let total: BigUint = self.subspace_counts.iter().zip(&self.fiber_sizes).map(|(a, b)| a * b).sum();
        total == self.matrix_count
    }
}
