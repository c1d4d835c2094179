//! The left-ideal relation graph and its quotient on ideal classes.
//!
//! Whether `X -> Y` is an edge depends only on the ideals `[X]` and `[Y]`, so
//! the graph is stored as the subspace lattice (one node per left ideal, with
//! strict-containment lists) plus the class of every vertex. Neighbor lists
//! are expanded on demand from class members. This keeps memory linear in the
//! vertex count even for graphs with billions of edges.

use std::collections::HashMap;
use std::io::{self, Write};

use num_traits::ToPrimitive;

use crate::counting::gaussian_binomial;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::format::field_header;
use crate::ideal::{all_ideals, LeftIdeal};
use crate::matrix::{check_cap, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphKind {
    /// One vertex per matrix.
    Full,
    /// One vertex per left ideal.
    Quotient,
}

impl GraphKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GraphKind::Full => "full",
            GraphKind::Quotient => "quotient",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Degrees {
    pub in_degree: u64,
    pub out_degree: u64,
    /// Undirected degree, `in + out`.
    pub degree: u64,
}

#[derive(Debug, Clone)]
pub struct RelationGraph {
    kind: GraphKind,
    directed: bool,
    n: usize,
    field: Field,
    classes: Vec<LeftIdeal>,
    /// `below[a * C + b]` iff `classes[a]` is a proper subset of `classes[b]`.
    below: Vec<bool>,
    class_out: Vec<Vec<usize>>,
    class_in: Vec<Vec<usize>>,
    class_of: Vec<u32>,
    members: Vec<Vec<usize>>,
    class_in_degree: Vec<u64>,
    class_out_degree: Vec<u64>,
}

fn subspace_total(n: usize, field: &Field) -> u128 {
    (0..=n)
        .map(|r| gaussian_binomial(n, r, field.q() as u64).unwrap().to_u128().unwrap_or(u128::MAX))
        .fold(0u128, |a, b| a.saturating_add(b))
}

impl RelationGraph {
    /// The graph on all `q^(n^2)` matrices.
    pub fn full(n: usize, field: &Field, directed: bool, cap: u64) -> Result<RelationGraph> {
        if n == 0 {
            return Err(Error::Precondition("n must be at least 1".into()));
        }
        let count = check_cap(n, field, cap)?;
        let classes = all_ideals(n, field);
        let index: HashMap<&LeftIdeal, u32> = classes.iter().enumerate().map(|(i, c)| (c, i as u32)).collect();
        let q = field.q();
        let class_of: Vec<u32> = (0..count)
            .map(|v| index[&LeftIdeal::of(&Matrix::decode_unchecked(v, n, q), field)])
            .collect();
        let mut members = vec![Vec::new(); classes.len()];
        for (v, &c) in class_of.iter().enumerate() {
            members[c as usize].push(v);
        }
        Ok(RelationGraph::assemble(GraphKind::Full, directed, n, field, classes, class_of, members))
    }

    /// The graph on left ideals (subspaces of `GF(q)^n`) under strict containment.
    pub fn quotient(n: usize, field: &Field, directed: bool, cap: u64) -> Result<RelationGraph> {
        if n == 0 {
            return Err(Error::Precondition("n must be at least 1".into()));
        }
        let count = subspace_total(n, field);
        if count > cap as u128 {
            return Err(Error::CapExceeded { what: format!("subspace lattice of GF({})^{n}", field.q()), count, cap });
        }
        let classes = all_ideals(n, field);
        let class_of = (0..classes.len() as u32).collect();
        let members = (0..classes.len()).map(|c| vec![c]).collect();
        Ok(RelationGraph::assemble(GraphKind::Quotient, directed, n, field, classes, class_of, members))
    }

    fn assemble(
        kind: GraphKind,
        directed: bool,
        n: usize,
        field: &Field,
        classes: Vec<LeftIdeal>,
        class_of: Vec<u32>,
        members: Vec<Vec<usize>>,
    ) -> RelationGraph {
        let c = classes.len();
        let mut below = vec![false; c * c];
        let mut class_out = vec![Vec::new(); c];
        let mut class_in = vec![Vec::new(); c];
        for a in 0..c {
            for b in 0..c {
                if classes[a].proper_subset(&classes[b], field).expect("same n") {
                    below[a * c + b] = true;
                    class_out[a].push(b);
                    class_in[b].push(a);
                }
            }
        }
        let size = |cls: &[usize]| cls.iter().map(|&k| members[k].len() as u64).sum::<u64>();
        let class_in_degree = class_in.iter().map(|l| size(l)).collect();
        let class_out_degree = class_out.iter().map(|l| size(l)).collect();
        RelationGraph {
            kind,
            directed,
            n,
            field: field.clone(),
            classes,
            below,
            class_out,
            class_in,
            class_of,
            members,
            class_in_degree,
            class_out_degree,
        }
    }

    /// Collapses ideal classes of a full graph into the quotient graph.
    pub fn contract(&self) -> RelationGraph {
        let keep: Vec<usize> = (0..self.classes.len()).filter(|&c| !self.members[c].is_empty()).collect();
        let classes: Vec<LeftIdeal> = keep.iter().map(|&c| self.classes[c].clone()).collect();
        let class_of = (0..classes.len() as u32).collect();
        let members = (0..classes.len()).map(|c| vec![c]).collect();
        RelationGraph::assemble(GraphKind::Quotient, self.directed, self.n, &self.field, classes, class_of, members)
    }

    pub fn with_directed(&self, directed: bool) -> RelationGraph {
        RelationGraph { directed, ..self.clone() }
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn vertex_count(&self) -> usize {
        self.class_of.len()
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[LeftIdeal] {
        &self.classes
    }

    pub fn class(&self, c: usize) -> &LeftIdeal {
        &self.classes[c]
    }

    #[inline]
    pub fn class_of(&self, v: usize) -> usize {
        self.class_of[v] as usize
    }

    pub fn members(&self, c: usize) -> &[usize] {
        &self.members[c]
    }

    /// Classes strictly above / below `c` in the containment order.
    pub fn class_successors(&self, c: usize) -> &[usize] {
        &self.class_out[c]
    }

    pub fn class_predecessors(&self, c: usize) -> &[usize] {
        &self.class_in[c]
    }

    #[inline]
    pub fn class_below(&self, a: usize, b: usize) -> bool {
        self.below[a * self.classes.len() + b]
    }

    pub fn class_index(&self, ideal: &LeftIdeal) -> Option<usize> {
        self.classes.iter().position(|c| c == ideal)
    }

    pub fn rank_of(&self, v: usize) -> usize {
        self.classes[self.class_of(v)].rank()
    }

    /// The matrix at a full-graph vertex.
    pub fn matrix(&self, v: usize) -> Result<Matrix> {
        match self.kind {
            GraphKind::Full => Matrix::decode(v as u64, self.n, &self.field),
            GraphKind::Quotient => Err(Error::Precondition("quotient vertices are ideals, not matrices".into())),
        }
    }

    /// The vertex of a matrix (full graph) or of its ideal (quotient graph).
    pub fn vertex_of(&self, x: &Matrix) -> Result<usize> {
        if x.n() != self.n {
            return Err(Error::DimensionMismatch(format!("matrix of size {} in a graph with n = {}", x.n(), self.n)));
        }
        match self.kind {
            GraphKind::Full => Ok(x.encode(&self.field)? as usize),
            GraphKind::Quotient => self
                .class_index(&LeftIdeal::of(x, &self.field))
                .ok_or_else(|| Error::Precondition("ideal not in graph".into())),
        }
    }

    /// `u -> v`, i.e. `[u]` properly contained in `[v]`.
    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.class_below(self.class_of(u), self.class_of(v))
    }

    /// Undirected adjacency.
    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.has_arc(u, v) || self.has_arc(v, u)
    }

    /// Edge in this graph's own orientation.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if self.directed {
            self.has_arc(u, v)
        } else {
            self.adjacent(u, v)
        }
    }

    fn expand(&self, classes: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = classes.iter().flat_map(|&c| self.members[c].iter().copied()).collect();
        out.sort_unstable();
        out
    }

    pub fn out_neighbors(&self, v: usize) -> Vec<usize> {
        self.expand(&self.class_out[self.class_of(v)])
    }

    pub fn in_neighbors(&self, v: usize) -> Vec<usize> {
        self.expand(&self.class_in[self.class_of(v)])
    }

    /// Undirected neighborhood, ascending.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let c = self.class_of(v);
        let both: Vec<usize> = self.class_in[c].iter().chain(&self.class_out[c]).copied().collect();
        self.expand(&both)
    }

    pub fn degrees(&self, v: usize) -> Degrees {
        let c = self.class_of(v);
        let (i, o) = (self.class_in_degree[c], self.class_out_degree[c]);
        Degrees { in_degree: i, out_degree: o, degree: i + o }
    }

    /// Number of arcs; equals the number of undirected edges.
    pub fn edge_count(&self) -> u64 {
        (0..self.classes.len())
            .map(|c| self.members[c].len() as u64 * self.class_out_degree[c])
            .sum()
    }

    /// Undirected adjacency lists. Memory grows with the edge count; meant for small graphs.
    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        (0..self.vertex_count()).map(|v| self.neighbors(v)).collect()
    }

    /// Header shared by both export formats.
    pub fn header(&self) -> String {
        format!(
            "kind={} n={} {} directed={} vertices={} edges={}",
            self.kind.as_str(),
            self.n,
            field_header(self.field.spec()),
            self.directed,
            self.vertex_count(),
            self.edge_count()
        )
    }

    fn for_each_edge(&self, mut f: impl FnMut(usize, usize) -> io::Result<()>) -> io::Result<()> {
        for u in 0..self.vertex_count() {
            let targets = if self.directed { self.out_neighbors(u) } else { self.neighbors(u) };
            for v in targets {
                if self.directed || u < v {
                    f(u, v)?;
                }
            }
        }
        Ok(())
    }

    /// Edge list: one `#` header line, then `u v` per edge in ascending order.
    pub fn write_edge_list<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "# {}", self.header())?;
        self.for_each_edge(|u, v| writeln!(w, "{u} {v}"))
    }

    pub fn write_dot<W: Write>(&self, w: &mut W) -> io::Result<()> {
        let (keyword, arrow) = if self.directed { ("digraph", "->") } else { ("graph", "--") };
        writeln!(w, "// {}", self.header())?;
        writeln!(w, "{keyword} left_ideal_relation {{")?;
        for v in 0..self.vertex_count() {
            writeln!(w, "  {v} [label=\"v{v}:r{}\"];", self.rank_of(v))?;
        }
        self.for_each_edge(|u, v| writeln!(w, "  {u} {arrow} {v};"))?;
        writeln!(w, "}}")
    }

    pub fn edge_list_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_edge_list(&mut buf).expect("writing to a Vec");
        String::from_utf8(buf).expect("ascii")
    }

    pub fn dot_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_dot(&mut buf).expect("writing to a Vec");
        String::from_utf8(buf).expect("ascii")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{fiber_size, predicted_degree};
    use crate::DEFAULT_VERTEX_CAP;
    use num_bigint::BigUint;

    fn full(p: u32, m: u32, n: usize) -> RelationGraph {
        RelationGraph::full(n, &Field::new(p, m, None).unwrap(), true, DEFAULT_VERTEX_CAP).unwrap()
    }

    /// Arcs by brute-force pairwise containment of canonical ideals.
    fn brute_arcs(n: usize, f: &Field) -> Vec<(usize, usize)> {
        let all: Vec<Matrix> = crate::matrix::enumerate_matrices(n, f, 1 << 20).unwrap().collect();
        let ideals: Vec<LeftIdeal> = all.iter().map(|x| LeftIdeal::of(x, f)).collect();
        let mut arcs = Vec::new();
        for u in 0..all.len() {
            for v in 0..all.len() {
                if u != v && ideals[u].proper_subset(&ideals[v], f).unwrap() {
                    arcs.push((u, v));
                }
            }
        }
        arcs
    }

    #[test]
    fn n1_q2_single_edge() {
        let g = full(2, 1, 1);
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert!(g.has_arc(0, 1));
        assert!(!g.has_arc(1, 0));
        let text = g.edge_list_string();
        assert_eq!(text.lines().skip(1).collect::<Vec<_>>(), vec!["0 1"]);
        assert!(text.starts_with("# kind=full n=1 p=2 m=1 modulus=0,1 directed=true vertices=2 edges=1"));
    }

    #[test]
    fn n2_q2_arc_set_matches_brute_force() {
        let f = Field::prime(2).unwrap();
        let g = full(2, 1, 2);
        let brute = brute_arcs(2, &f);
        assert_eq!(brute.len(), 69);
        assert_eq!(g.edge_count(), 69);
        let listed: Vec<(usize, usize)> = g
            .edge_list_string()
            .lines()
            .skip(1)
            .map(|l| {
                let mut it = l.split(' ').map(|x| x.parse().unwrap());
                (it.next().unwrap(), it.next().unwrap())
            })
            .collect();
        assert_eq!(listed, brute);
        // no arcs between distinct rank-1 classes
        for (u, v) in brute {
            assert!(g.rank_of(u) < g.rank_of(v));
        }
    }

    #[test]
    fn quotient_sizes() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(RelationGraph::quotient(2, &f2, true, 100).unwrap().vertex_count(), 5);
        assert_eq!(RelationGraph::quotient(3, &f2, true, 100).unwrap().vertex_count(), 16);
        for p in [2, 3, 5, 7] {
            let g = RelationGraph::quotient(1, &Field::prime(p).unwrap(), true, 100).unwrap();
            assert_eq!((g.vertex_count(), g.edge_count()), (2, 1));
        }
        assert!(matches!(RelationGraph::quotient(3, &f2, true, 10), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn cap_is_enforced() {
        let f3 = Field::prime(3).unwrap();
        assert!(matches!(RelationGraph::full(4, &f3, true, DEFAULT_VERTEX_CAP), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn degree_examples_n2_q2() {
        let g = full(2, 1, 2);
        let d0 = g.degrees(0);
        assert_eq!((d0.in_degree, d0.out_degree), (0, 15));
        for v in 0..16 {
            match g.rank_of(v) {
                1 => assert_eq!((g.degrees(v).in_degree, g.degrees(v).out_degree), (1, 6)),
                2 => assert_eq!(g.degrees(v).degree, 10),
                _ => {}
            }
            assert_eq!(g.degrees(v).in_degree as usize, g.in_neighbors(v).len());
            assert_eq!(g.degrees(v).out_degree as usize, g.out_neighbors(v).len());
        }
    }

    #[test]
    fn degree_laws() {
        for (p, n) in [(2, 2), (3, 2), (2, 3)] {
            let g = full(p, 1, n);
            let mut by_rank: Vec<Option<Degrees>> = vec![None; n + 1];
            for v in 0..g.vertex_count() {
                let r = g.rank_of(v);
                let d = g.degrees(v);
                match by_rank[r] {
                    None => by_rank[r] = Some(d),
                    Some(prev) => assert_eq!(prev, d),
                }
                let pd = predicted_degree(n, r, p as u64).unwrap();
                assert_eq!(BigUint::from(d.in_degree), pd.in_degree);
                assert_eq!(BigUint::from(d.out_degree), pd.out_degree);
            }
            for w in by_rank.windows(2) {
                let (a, b) = (w[0].unwrap(), w[1].unwrap());
                assert!(a.in_degree < b.in_degree && a.out_degree > b.out_degree);
            }
        }
    }

    #[test]
    fn contraction_reproduces_quotient() {
        for (p, m, n) in [(2, 1, 2), (3, 1, 2), (2, 1, 3), (2, 2, 2)] {
            let f = Field::new(p, m, None).unwrap();
            let g = RelationGraph::full(n, &f, true, DEFAULT_VERTEX_CAP).unwrap();
            let q = RelationGraph::quotient(n, &f, true, DEFAULT_VERTEX_CAP).unwrap();
            let c = g.contract();
            assert_eq!(c.classes(), q.classes());
            assert_eq!(c.edge_list_string(), q.edge_list_string());
        }
    }

    #[test]
    fn fiber_sizes_match_counting() {
        for (p, m, n) in [(2, 1, 2), (3, 1, 2), (2, 1, 3), (2, 2, 2)] {
            let f = Field::new(p, m, None).unwrap();
            let g = RelationGraph::full(n, &f, true, DEFAULT_VERTEX_CAP).unwrap();
            for c in 0..g.class_count() {
                let expected = fiber_size(n, g.class(c).rank(), f.q() as u64).unwrap();
                assert_eq!(BigUint::from(g.members(c).len()), expected);
            }
        }
    }

    #[test]
    fn arcs_strictly_increase_rank() {
        let g = full(3, 1, 2);
        for u in 0..g.vertex_count() {
            for v in g.out_neighbors(u) {
                assert!(g.rank_of(u) < g.rank_of(v));
            }
        }
    }

    #[test]
    fn dot_export() {
        let g = full(2, 1, 1);
        let dot = g.dot_string();
        assert!(dot.contains("digraph"));
        assert!(dot.contains("0 [label=\"v0:r0\"];"));
        assert!(dot.contains("1 [label=\"v1:r1\"];"));
        assert!(dot.contains("0 -> 1;"));
        let u = g.with_directed(false).dot_string();
        assert!(u.contains("graph left_ideal_relation") && u.contains("0 -- 1;"));
    }

    #[test]
    fn undirected_export_lists_each_edge_once() {
        let g = full(2, 1, 2).with_directed(false);
        let text = g.edge_list_string();
        let lines: Vec<&str> = text.lines().skip(1).collect();
        assert_eq!(lines.len(), 69);
        for l in lines {
            let (u, v) = l.split_once(' ').unwrap();
            assert!(u.parse::<usize>().unwrap() < v.parse::<usize>().unwrap());
        }
    }

    #[test]
    fn export_is_deterministic() {
        let a = full(3, 1, 2).edge_list_string();
        let b = full(3, 1, 2).edge_list_string();
        assert_eq!(a, b);
    }
}
