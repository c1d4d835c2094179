//! Automorphisms of the directed relation graph.
//!
//! A vertex permutation is stored densely (`perm[v]` is the image of vertex
//! `v`). Composition follows the convention that the right factor acts first:
//! `compose(f, g)[v] = f[g[v]]`.
//!
//! The standard families are right multiplication `phi_P: X -> XP`, the
//! entrywise Frobenius map `upsilon_t`, within-class shuffles `sigma`, and for
//! `n = 2` within-rank shuffles `rho`. For `n >= 3` every automorphism factors
//! as `phi_P . upsilon_t . sigma`; [`decompose`] computes such a factorization.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::graph::RelationGraph;
use crate::ideal::LeftIdeal;
use crate::matrix::{check_cap, random_invertible, Elementary, Matrix};

/// A bijection on the vertex set of a full graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automorphism {
    n: usize,
    field: Field,
    perm: Vec<usize>,
}

impl Automorphism {
    /// Wraps a permutation array, checking only that it is a bijection.
    pub fn from_perm(n: usize, field: &Field, perm: Vec<usize>) -> Result<Automorphism> {
        let count = check_cap(n, field, u64::MAX)?;
        if perm.len() != count {
            return Err(Error::NotAPermutation(format!("length {} but {count} vertices", perm.len())));
        }
        let mut seen = vec![false; count];
        for (v, &w) in perm.iter().enumerate() {
            if w >= count {
                return Err(Error::NotAPermutation(format!("image {w} of {v} out of range")));
            }
            if std::mem::replace(&mut seen[w], true) {
                return Err(Error::NotAPermutation(format!("vertex {w} is hit twice")));
            }
        }
        Ok(Automorphism { n, field: field.clone(), perm })
    }

    pub fn identity(n: usize, field: &Field) -> Result<Automorphism> {
        let count = check_cap(n, field, u64::MAX)?;
        Ok(Automorphism { n, field: field.clone(), perm: (0..count).collect() })
    }

    fn from_matrix_map(n: usize, field: &Field, f: impl Fn(&Matrix) -> Matrix) -> Result<Automorphism> {
        let count = check_cap(n, field, u64::MAX)?;
        let q = field.q();
        let perm = (0..count)
            .map(|v| f(&Matrix::decode_unchecked(v, n, q)).encode_unchecked(q))
            .collect();
        Ok(Automorphism { n, field: field.clone(), perm })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    #[inline]
    pub fn apply(&self, v: usize) -> usize {
        self.perm[v]
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(v, &w)| v == w)
    }

    fn check_compatible(&self, other: &Automorphism) -> Result<()> {
        if self.n != other.n || self.field != other.field {
            return Err(Error::DimensionMismatch(format!(
                "automorphisms over n={} {} and n={} {}",
                self.n,
                self.field.spec(),
                other.n,
                other.field.spec()
            )));
        }
        Ok(())
    }

    /// `self . other`: apply `other` first.
    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism> {
        self.check_compatible(other)?;
        let perm = other.perm.iter().map(|&w| self.perm[w]).collect();
        Ok(Automorphism { n: self.n, field: self.field.clone(), perm })
    }

    pub fn inverse(&self) -> Automorphism {
        let mut perm = vec![0; self.perm.len()];
        for (v, &w) in self.perm.iter().enumerate() {
            perm[w] = v;
        }
        Automorphism { n: self.n, field: self.field.clone(), perm }
    }

    /// Order of the permutation as an element of the symmetric group.
    pub fn order(&self) -> BigUint {
        let mut seen = vec![false; self.perm.len()];
        let mut order = BigUint::one();
        for start in 0..self.perm.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut v = start;
            while !seen[v] {
                seen[v] = true;
                v = self.perm[v];
                len += 1;
            }
            order = order.lcm(&BigUint::from(len));
        }
        order
    }

    /// Whether every vertex keeps its rank.
    pub fn preserves_rank(&self) -> bool {
        let q = self.field.q();
        self.perm.iter().enumerate().all(|(v, &w)| {
            Matrix::decode_unchecked(v, self.n, q).rank(&self.field)
                == Matrix::decode_unchecked(w, self.n, q).rank(&self.field)
        })
    }

    /// Checks that `g` arcs preserve under `self`, both directions.
    ///
    /// Arcs depend only on ideal classes, so it suffices to look at the set of
    /// pairs `(class(v), class(self(v)))`: the permutation is an automorphism
    /// iff any two such pairs `(A, A')`, `(B, B')` satisfy
    /// `A < B  <=>  A' < B'`. On failure a violating vertex pair is returned.
    pub fn verify(&self, g: &RelationGraph) -> Result<Verification> {
        if g.vertex_count() != self.perm.len() || g.n() != self.n || g.field() != &self.field {
            return Err(Error::DimensionMismatch(format!(
                "permutation on {} vertices against a graph with {}",
                self.perm.len(),
                g.vertex_count()
            )));
        }
        let c = g.class_count();
        let mut witness: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs = Vec::new();
        for (v, &w) in self.perm.iter().enumerate() {
            let key = (g.class_of(v), g.class_of(w));
            witness.entry(key).or_insert_with(|| {
                pairs.push(key);
                v
            });
        }
        debug_assert!(pairs.len() <= c * c);
        for &(a, a2) in &pairs {
            for &(b, b2) in &pairs {
                let before = g.class_below(a, b);
                let after = g.class_below(a2, b2);
                if before != after {
                    let (u, v) = (witness[&(a, a2)], witness[&(b, b2)]);
                    return Ok(Verification::Violation { u, v, arc_before: before, arc_after: after });
                }
            }
        }
        Ok(Verification::Automorphism)
    }
}

impl fmt::Display for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "permutation of {} vertices (n={}, {})", self.perm.len(), self.n, self.field.spec())
    }
}

/// Result of [`Automorphism::verify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verification {
    Automorphism,
    /// `u -> v` is an arc iff `arc_before`; `f(u) -> f(v)` is an arc iff `arc_after`.
    Violation { u: usize, v: usize, arc_before: bool, arc_after: bool },
}

impl Verification {
    pub fn is_automorphism(&self) -> bool {
        matches!(self, Verification::Automorphism)
    }
}

/// `X -> XP`.
pub fn phi(p: &Matrix, field: &Field) -> Result<Automorphism> {
    if !p.is_invertible(field) {
        return Err(Error::Singular);
    }
    Automorphism::from_matrix_map(p.n(), field, |x| x.mul_unchecked(p, field))
}

/// Entrywise `a -> a^(p^t)`.
pub fn upsilon(t: u32, n: usize, field: &Field) -> Result<Automorphism> {
    let table = field.frobenius_table(t)?;
    Automorphism::from_matrix_map(n, field, |x| x.map_entries(|a| table[a.code() as usize]))
}

fn frobenius_matrix(x: &Matrix, table: &[FieldElement]) -> Matrix {
    x.map_entries(|a| table[a.code() as usize])
}

/// A permutation of the members of one ideal class, given as `(from, to)` pairs.
/// Vertices not mentioned are fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassPermutation {
    pub ideal: LeftIdeal,
    pub mapping: Vec<(usize, usize)>,
}

fn block_permutation<'a>(
    g: &RelationGraph,
    blocks: impl Iterator<Item = (&'a [(usize, usize)], &'a dyn Fn(usize) -> bool)>,
) -> Result<Vec<usize>> {
    let count = g.vertex_count();
    let mut perm: Vec<usize> = (0..count).collect();
    let mut touched = vec![false; count];
    for (mapping, inside) in blocks {
        for &(from, to) in mapping {
            if from >= count || to >= count {
                return Err(Error::VertexOutOfRange { v: from.max(to) as u64, count: count as u64 });
            }
            if !inside(from) || !inside(to) {
                return Err(Error::Precondition(format!("pair {from} -> {to} leaves its block")));
            }
            if std::mem::replace(&mut touched[from], true) {
                return Err(Error::NotAPermutation(format!("vertex {from} mapped twice")));
            }
            perm[from] = to;
        }
    }
    let mut hit = vec![false; count];
    for &w in &perm {
        if std::mem::replace(&mut hit[w], true) {
            return Err(Error::NotAPermutation(format!("vertex {w} is hit twice")));
        }
    }
    Ok(perm)
}

fn require_full(g: &RelationGraph) -> Result<()> {
    match g.kind() {
        crate::graph::GraphKind::Full => Ok(()),
        _ => Err(Error::Precondition("a full graph is required".into())),
    }
}

/// Block permutation acting inside ideal classes.
pub fn sigma_from_class_perms(g: &RelationGraph, assignment: &[ClassPermutation]) -> Result<Automorphism> {
    require_full(g)?;
    let mut tests: Vec<Box<dyn Fn(usize) -> bool>> = Vec::new();
    for cp in assignment {
        let c = g
            .class_index(&cp.ideal)
            .ok_or_else(|| Error::Precondition(format!("unknown ideal {}", cp.ideal)))?;
        tests.push(Box::new(move |v| g.class_of(v) == c));
    }
    let perm = block_permutation(g, assignment.iter().zip(&tests).map(|(cp, t)| (&cp.mapping[..], &**t as &dyn Fn(usize) -> bool)))?;
    Ok(Automorphism { n: g.n(), field: g.field().clone(), perm })
}

/// Non-fixed `(from, to)` pairs per rank, indexed by rank.
pub type RankAssignment = Vec<Vec<(usize, usize)>>;

/// For `n = 2`: block permutation acting inside rank classes. `assignment[r]`
/// holds the `(from, to)` pairs for rank `r`.
pub fn rho_from_rank_perms(g: &RelationGraph, assignment: &[Vec<(usize, usize)>]) -> Result<Automorphism> {
    require_full(g)?;
    if g.n() != 2 {
        return Err(Error::Precondition(format!("rank-class shuffles need n = 2, got n = {}", g.n())));
    }
    if assignment.len() > 3 {
        return Err(Error::IndexOutOfRange(format!("{} rank classes given, n = 2 has 3", assignment.len())));
    }
    let tests: Vec<Box<dyn Fn(usize) -> bool>> =
        (0..assignment.len()).map(|r| Box::new(move |v| g.rank_of(v) == r) as Box<dyn Fn(usize) -> bool>).collect();
    let perm = block_permutation(g, assignment.iter().zip(&tests).map(|(m, t)| (&m[..], &**t as &dyn Fn(usize) -> bool)))?;
    Ok(Automorphism { n: 2, field: g.field().clone(), perm })
}

fn shuffled_pairs<R: Rng + ?Sized>(members: &[usize], rng: &mut R) -> Vec<(usize, usize)> {
    let mut images = members.to_vec();
    images.shuffle(rng);
    members.iter().copied().zip(images).filter(|(a, b)| a != b).collect()
}

/// Uniformly random within-class shuffle.
pub fn random_sigma<R: Rng + ?Sized>(g: &RelationGraph, rng: &mut R) -> Result<Automorphism> {
    let assignment: Vec<ClassPermutation> = (0..g.class_count())
        .map(|c| ClassPermutation { ideal: g.class(c).clone(), mapping: shuffled_pairs(g.members(c), rng) })
        .collect();
    sigma_from_class_perms(g, &assignment)
}

/// Members of each rank class, ascending.
pub fn rank_classes(g: &RelationGraph) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); g.n() + 1];
    for v in 0..g.vertex_count() {
        out[g.rank_of(v)].push(v);
    }
    out
}

/// Uniformly random within-rank shuffle (`n = 2`), returned with its assignment.
pub fn random_rho<R: Rng + ?Sized>(g: &RelationGraph, rng: &mut R) -> Result<(RankAssignment, Automorphism)> {
    let assignment: RankAssignment = rank_classes(g).iter().map(|m| shuffled_pairs(m, rng)).collect();
    let rho = rho_from_rank_perms(g, &assignment)?;
    Ok((assignment, rho))
}

/// `upsilon_t` with `t` uniform in `[0, m)`.
pub fn random_upsilon<R: Rng + ?Sized>(n: usize, field: &Field, rng: &mut R) -> Result<Automorphism> {
    upsilon(rng.random_range(0..field.m()), n, field)
}

/// A seeded standard triple and its composite `phi_P . upsilon_t . sigma`.
#[derive(Debug, Clone)]
pub struct StandardSample {
    pub p: Matrix,
    pub t: u32,
    pub sigma: Automorphism,
    pub composite: Automorphism,
}

pub fn random_standard<R: Rng + ?Sized>(g: &RelationGraph, rng: &mut R) -> Result<StandardSample> {
    let field = g.field();
    let p = random_invertible(g.n(), field, rng);
    let t = rng.random_range(0..field.m());
    let sigma = random_sigma(g, rng)?;
    let composite = phi(&p, field)?.compose(&upsilon(t, g.n(), field)?)?.compose(&sigma)?;
    Ok(StandardSample { p, t, sigma, composite })
}

/// A factorization `f = phi_P . upsilon_t . sigma`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub p: Matrix,
    pub t: u32,
    pub sigma: Automorphism,
}

impl Decomposition {
    pub fn recompose(&self) -> Result<Automorphism> {
        let field = self.sigma.field();
        phi(&self.p, field)?.compose(&upsilon(self.t, self.sigma.n(), field)?)?.compose(&self.sigma)
    }

    /// Nontrivial cycles of `sigma`, grouped by ideal class in class order.
    /// Each cycle starts at its smallest vertex.
    pub fn sigma_cycles(&self, g: &RelationGraph) -> Vec<(usize, Vec<Vec<usize>>)> {
        let mut by_class: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
        for cycle in cycles(&self.sigma.perm) {
            by_class.entry(g.class_of(cycle[0])).or_default().push(cycle);
        }
        by_class.into_iter().collect()
    }
}

/// Nontrivial cycles of a permutation, each starting at its least element,
/// ordered by that element.
pub fn cycles(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            cycle.push(v);
            v = perm[v];
        }
        out.push(cycle);
    }
    out
}

/// Permutation array built from disjoint cycles.
pub fn perm_from_cycles(len: usize, cycles: &[Vec<usize>]) -> Result<Vec<usize>> {
    let mut perm: Vec<usize> = (0..len).collect();
    let mut seen = vec![false; len];
    for cycle in cycles {
        for (i, &v) in cycle.iter().enumerate() {
            if v >= len {
                return Err(Error::VertexOutOfRange { v: v as u64, count: len as u64 });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::NotAPermutation(format!("vertex {v} appears in two cycles")));
            }
            perm[v] = cycle[(i + 1) % cycle.len()];
        }
    }
    Ok(perm)
}

fn unit_vector(n: usize, i: usize) -> Vec<FieldElement> {
    let mut e = vec![FieldElement::ZERO; n];
    e[i] = FieldElement::ONE;
    e
}

/// Factors an automorphism of the full graph for `n >= 3`.
///
/// The matrix part is found by normalizing the images of the rank-1 ideals
/// spanned by the standard basis vectors, then of the all-one vector. The
/// field automorphism is read off the lines spanned by `e_1 + a e_2`. The
/// remainder must fix every ideal class; if it does not, the input was not an
/// automorphism.
pub fn decompose(f: &Automorphism, g: &RelationGraph) -> Result<Decomposition> {
    let n = f.n;
    let field = &f.field;
    if n < 3 {
        return Err(Error::Precondition(format!("decomposition needs n >= 3, got n = {n}")));
    }
    require_full(g)?;
    if g.n() != n || g.field() != field || g.vertex_count() != f.len() {
        return Err(Error::DimensionMismatch("permutation and graph disagree".into()));
    }
    let q = field.q();
    let image = |x: &Matrix| Matrix::decode_unchecked(f.perm[x.encode_unchecked(q)], n, q);
    let rank1_vector = |x: &Matrix, what: &str| {
        LeftIdeal::of(x, field)
            .canonical_rank1_vector()
            .map_err(|e| Error::Decomposition(format!("image of {what} is not rank 1 ({e})")))
    };

    let mut acc = Matrix::identity(n);
    for i in 0..n {
        let e_i = Matrix::elementary(&Elementary::FirstRow(unit_vector(n, i)), n, field)?;
        let a = rank1_vector(&image(&e_i).mul_unchecked(&acc, field), "a basis line")?;
        let l = (i..n)
            .find(|&l| !a[l].is_zero())
            .ok_or_else(|| Error::Decomposition(format!("no nonzero coordinate at or after {} in {a:?}", i + 1)))?;
        let al_inv = field.inv(a[l])?;
        let mut clear = Matrix::identity(n);
        for j in (0..n).filter(|&j| j != l) {
            clear.set(l, j, field.neg(field.mul(al_inv, a[j])));
        }
        let step = clear
            .mul_unchecked(&Matrix::elementary(&Elementary::Scale { i: l, a: al_inv }, n, field)?, field)
            .mul_unchecked(&Matrix::elementary(&Elementary::Swap { i, j: l }, n, field)?, field);
        acc = acc.mul_unchecked(&step, field);
    }

    let all_one = Matrix::elementary(&Elementary::AllOneFirstRow, n, field)?;
    let a = rank1_vector(&image(&all_one).mul_unchecked(&acc, field), "the all-one line")?;
    let mut diag = Matrix::identity(n);
    for (k, &ak) in a.iter().enumerate() {
        let inv = field
            .inv(ak)
            .map_err(|_| Error::Decomposition(format!("all-one image {a:?} has a zero coordinate")))?;
        diag.set(k, k, inv);
    }
    acc = acc.mul_unchecked(&diag, field);

    // a -> a' on the lines spanned by e_1 + a e_2
    let mut induced = Vec::with_capacity(q as usize);
    for a in field.elements() {
        let mut v = unit_vector(n, 0);
        v[1] = a;
        let x = Matrix::elementary(&Elementary::FirstRow(v), n, field)?;
        let b = rank1_vector(&image(&x).mul_unchecked(&acc, field), "a line e1 + a e2")?;
        if b[0] != FieldElement::ONE || b[2..].iter().any(|c| !c.is_zero()) {
            return Err(Error::Decomposition(format!("line through e1 + {a} e2 mapped to {b:?}")));
        }
        induced.push(b[1]);
    }
    let t = field
        .automorphism_exponents()
        .into_iter()
        .find(|&t| field.elements().all(|a| field.frobenius(a, t).unwrap() == induced[a.code() as usize]))
        .ok_or_else(|| Error::Decomposition(format!("induced map {induced:?} is not a field automorphism")))?;

    let undo = field.frobenius_table(field.inverse_exponent(t))?;
    let sigma: Vec<usize> = (0..f.len())
        .map(|v| {
            let y = Matrix::decode_unchecked(f.perm[v], n, q).mul_unchecked(&acc, field);
            frobenius_matrix(&y, &undo).encode_unchecked(q)
        })
        .collect();
    if let Some(v) = (0..f.len()).find(|&v| g.class_of(sigma[v]) != g.class_of(v)) {
        return Err(Error::Decomposition(format!(
            "residual moves vertex {v} from class {} to class {}",
            g.class(g.class_of(v)),
            g.class(g.class_of(sigma[v]))
        )));
    }
    let sigma = Automorphism::from_perm(n, field, sigma)?;
    Ok(Decomposition { p: acc.inverse(field)?, t, sigma })
}

/// For `n = 2`: the restriction of `f` to each rank class, as non-fixed
/// `(from, to)` pairs in ascending order of `from`.
pub fn decompose_n2(f: &Automorphism, g: &RelationGraph) -> Result<RankAssignment> {
    if f.n != 2 {
        return Err(Error::Precondition(format!("rank-class split needs n = 2, got n = {}", f.n)));
    }
    require_full(g)?;
    let mut out = vec![Vec::new(); 3];
    for (v, &w) in f.perm.iter().enumerate() {
        let (r, s) = (g.rank_of(v), g.rank_of(w));
        if r != s {
            return Err(Error::Decomposition(format!("vertex {v} of rank {r} maps to rank {s}")));
        }
        if v != w {
            out[r].push((v, w));
        }
    }
    Ok(out)
}

/// A digraph with vertex colors, small enough for an adjacency matrix.
#[derive(Debug, Clone)]
pub struct ColoredDigraph {
    n: usize,
    arcs: Vec<bool>,
    colors: Vec<u64>,
}

impl ColoredDigraph {
    pub fn new(n: usize, arc: impl Fn(usize, usize) -> bool, colors: Vec<u64>) -> ColoredDigraph {
        assert_eq!(colors.len(), n);
        let arcs = (0..n * n).map(|k| arc(k / n, k % n)).collect();
        ColoredDigraph { n, arcs, colors }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    fn arc(&self, u: usize, v: usize) -> bool {
        self.arcs[u * self.n + v]
    }

    /// Colors each vertex by its color and (in, out) degree.
    pub fn refine_by_degree(&self) -> ColoredDigraph {
        let mut keys: Vec<(u64, usize, usize)> = (0..self.n)
            .map(|v| {
                let out = (0..self.n).filter(|&w| self.arc(v, w)).count();
                let inn = (0..self.n).filter(|&w| self.arc(w, v)).count();
                (self.colors[v], inn, out)
            })
            .collect();
        let mut distinct = keys.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let colors = keys
            .drain(..)
            .map(|k| distinct.binary_search(&k).unwrap() as u64)
            .collect();
        ColoredDigraph { n: self.n, arcs: self.arcs.clone(), colors }
    }

    /// Exact order of the color-preserving automorphism group.
    ///
    /// Walks a chain of pointwise stabilizers. At each level the orbit of the
    /// next base point is found by asking, for every candidate image, whether
    /// the partial map extends to a full automorphism (backtracking with
    /// most-constrained-first ordering). Known orbit points are closed under
    /// the automorphisms found so far, so each orbit point costs at most one
    /// search. The order is the product of the orbit sizes.
    pub fn automorphism_count(&self) -> BigUint {
        let n = self.n;
        let mut order = BigUint::one();
        let mut base: Vec<usize> = Vec::new();
        for v in 0..n {
            let mut in_orbit = vec![false; n];
            in_orbit[v] = true;
            let mut generators: Vec<Vec<usize>> = Vec::new();
            for w in 0..n {
                if in_orbit[w] || self.colors[w] != self.colors[v] || base.contains(&w) {
                    continue;
                }
                let mut search = Extension::new(self);
                for &b in &base {
                    search.assign(b, b);
                }
                if !search.consistent(v, w) {
                    continue;
                }
                search.assign(v, w);
                if search.extend() {
                    generators.push(search.map.clone());
                    close_orbit(&mut in_orbit, &generators);
                }
            }
            order *= BigUint::from(in_orbit.iter().filter(|&&b| b).count());
            base.push(v);
        }
        order
    }
}

fn close_orbit(in_orbit: &mut [bool], generators: &[Vec<usize>]) {
    let mut stack: Vec<usize> = (0..in_orbit.len()).filter(|&x| in_orbit[x]).collect();
    while let Some(x) = stack.pop() {
        for g in generators {
            let y = g[x];
            if !in_orbit[y] {
                in_orbit[y] = true;
                stack.push(y);
            }
        }
    }
}

const UNSET: usize = usize::MAX;

struct Extension<'a> {
    g: &'a ColoredDigraph,
    map: Vec<usize>,
    used: Vec<bool>,
    mapped: Vec<usize>,
}

impl<'a> Extension<'a> {
    fn new(g: &'a ColoredDigraph) -> Extension<'a> {
        Extension { g, map: vec![UNSET; g.n], used: vec![false; g.n], mapped: Vec::new() }
    }

    fn assign(&mut self, x: usize, y: usize) {
        self.map[x] = y;
        self.used[y] = true;
        self.mapped.push(x);
    }

    fn unassign(&mut self) {
        let x = self.mapped.pop().expect("something mapped");
        self.used[self.map[x]] = false;
        self.map[x] = UNSET;
    }

    fn consistent(&self, x: usize, y: usize) -> bool {
        let g = self.g;
        if self.used[y] || g.colors[x] != g.colors[y] || g.arc(x, x) != g.arc(y, y) {
            return false;
        }
        self.mapped.iter().all(|&u| {
            let fu = self.map[u];
            g.arc(u, x) == g.arc(fu, y) && g.arc(x, u) == g.arc(y, fu)
        })
    }

    fn extend(&mut self) -> bool {
        let n = self.g.n;
        let mut best: Option<(usize, Vec<usize>)> = None;
        for x in (0..n).filter(|&x| self.map[x] == UNSET) {
            let cands: Vec<usize> = (0..n).filter(|&y| self.consistent(x, y)).collect();
            if cands.is_empty() {
                return false;
            }
            let better = best.as_ref().is_none_or(|(_, b)| cands.len() < b.len());
            if better {
                let single = cands.len() == 1;
                best = Some((x, cands));
                if single {
                    break;
                }
            }
        }
        let Some((x, cands)) = best else {
            return true;
        };
        for y in cands {
            self.assign(x, y);
            if self.extend() {
                return true;
            }
            self.unassign();
        }
        false
    }
}

/// Largest quotient graph handed to the automorphism search.
pub const QUOTIENT_SEARCH_CAP: usize = 40;

fn class_digraph(g: &RelationGraph, colors: Vec<u64>) -> ColoredDigraph {
    ColoredDigraph::new(g.class_count(), |a, b| g.class_below(a, b), colors).refine_by_degree()
}

/// Order of the automorphism group of the directed quotient graph.
pub fn quotient_aut_order(n: usize, field: &Field) -> Result<BigUint> {
    let g = RelationGraph::quotient(n, field, true, QUOTIENT_SEARCH_CAP as u64)?;
    let colors = (0..g.class_count()).map(|c| g.class(c).rank() as u64).collect();
    Ok(class_digraph(&g, colors).automorphism_count())
}

/// Order of the automorphism group of a full or quotient graph, searched
/// directly on its vertices. Only meant for small graphs.
pub fn graph_aut_order(g: &RelationGraph, cap: usize) -> Result<BigUint> {
    if g.vertex_count() > cap {
        return Err(Error::CapExceeded {
            what: "automorphism search".into(),
            count: g.vertex_count() as u128,
            cap: cap as u64,
        });
    }
    let d = ColoredDigraph::new(g.vertex_count(), |u, v| g.has_arc(u, v), vec![0; g.vertex_count()]);
    Ok(d.refine_by_degree().automorphism_count())
}

/// The full-graph automorphism group order, in two forms.
///
/// `class_product` is `|Aut(quotient)| * prod over classes of (fiber size)!`:
/// every quotient automorphism lifts, and the members of each class can be
/// shuffled freely.
///
/// `exact` also accounts for classes that are twins, i.e. have identical in-
/// and out-neighborhoods in the quotient. Members of twin classes are
/// interchangeable in the full graph even across classes, so the group is
/// `|Aut(twin quotient, weighted)| * prod over twin groups of (group size)!`.
/// This only differs from `class_product` when twins exist, which in this
/// family happens exactly for `n = 2` (all lines share the same neighbors).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullAutOrder {
    pub quotient_order: BigUint,
    /// `(fiber size, number of classes with that size)`, ascending.
    pub fiber_factorials: Vec<(u64, usize)>,
    pub class_product: BigUint,
    pub twin_quotient_order: BigUint,
    /// `(twin group size, number of groups with that size)`, ascending.
    pub twin_factorials: Vec<(u64, usize)>,
    pub exact: BigUint,
}

fn factorial(k: u64) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * i)
}

fn tally(sizes: impl Iterator<Item = u64>) -> Vec<(u64, usize)> {
    let mut map: BTreeMap<u64, usize> = BTreeMap::new();
    for s in sizes {
        *map.entry(s).or_default() += 1;
    }
    map.into_iter().collect()
}

fn factorial_product(factors: &[(u64, usize)]) -> BigUint {
    factors.iter().fold(BigUint::one(), |acc, &(s, k)| acc * factorial(s).pow(k as u32))
}

fn expression(lead: &BigUint, factors: &[(u64, usize)]) -> String {
    let mut s = lead.to_string();
    for &(size, k) in factors {
        s.push_str(&format!(" * ({size}!)^{k}"));
    }
    s
}

impl FullAutOrder {
    pub fn class_product_expression(&self) -> String {
        expression(&self.quotient_order, &self.fiber_factorials)
    }

    pub fn exact_expression(&self) -> String {
        expression(&self.twin_quotient_order, &self.twin_factorials)
    }
}

pub fn full_aut_order(n: usize, field: &Field) -> Result<FullAutOrder> {
    let quotient_order = quotient_aut_order(n, field)?;
    let g = RelationGraph::quotient(n, field, true, QUOTIENT_SEARCH_CAP as u64)?;
    let q = field.q() as u64;
    let fiber = |c: usize| {
        crate::counting::fiber_size(n, g.class(c).rank(), q)
            .expect("rank at most n")
            .try_into()
            .map_err(|_| Error::Precondition("fiber size does not fit in 64 bits".into()))
    };
    let fibers: Vec<u64> = (0..g.class_count()).map(fiber).collect::<Result<_>>()?;
    let fiber_factorials = tally(fibers.iter().copied());
    let class_product = &quotient_order * factorial_product(&fiber_factorials);

    // group classes with identical neighborhoods
    let mut group_of: BTreeMap<(Vec<usize>, Vec<usize>), Vec<usize>> = BTreeMap::new();
    for c in 0..g.class_count() {
        let key = (g.class_predecessors(c).to_vec(), g.class_successors(c).to_vec());
        group_of.entry(key).or_default().push(c);
    }
    let groups: Vec<Vec<usize>> = group_of.into_values().collect();
    let sizes: Vec<u64> = groups.iter().map(|gr| gr.iter().map(|&c| fibers[c]).sum()).collect();
    let twin = ColoredDigraph::new(groups.len(), |a, b| g.class_below(groups[a][0], groups[b][0]), sizes.clone())
        .refine_by_degree();
    let twin_quotient_order = twin.automorphism_count();
    let twin_factorials = tally(sizes.into_iter());
    let exact = &twin_quotient_order * factorial_product(&twin_factorials);
    Ok(FullAutOrder { quotient_order, fiber_factorials, class_product, twin_quotient_order, twin_factorials, exact })
}
