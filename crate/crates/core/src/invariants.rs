//! Graph invariants of the undirected relation graph.
//!
//! Adjacency is comparability in the lattice of ideals, so almost everything
//! reduces to the class level: cliques are chains of classes, the distance
//! between vertices of different classes is the distance between their
//! classes, and two distinct vertices of one class are at distance 2 (they
//! share every neighbor and are not adjacent). The routines here accept
//! either orientation of the graph and always read it as undirected.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{GraphKind, RelationGraph};
use crate::matrix::{Elementary, Matrix};

/// Longest chain of classes, restricted to classes accepted by `keep`.
/// Returns the chain from bottom to top.
fn longest_chain(g: &RelationGraph, keep: impl Fn(usize) -> bool) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.class_count()).filter(|&c| keep(c) && !g.members(c).is_empty()).collect();
    order.sort_by_key(|&c| g.class(c).rank());
    let mut len = vec![0usize; g.class_count()];
    let mut prev = vec![usize::MAX; g.class_count()];
    for &c in &order {
        len[c] = 1;
        for &b in g.class_predecessors(c) {
            if len[b] > 0 && len[b] + 1 > len[c] {
                len[c] = len[b] + 1;
                prev[c] = b;
            }
        }
    }
    let Some(&top) = order.iter().max_by_key(|&&c| (len[c], std::cmp::Reverse(c))) else {
        return Vec::new();
    };
    let mut chain = vec![top];
    while prev[*chain.last().unwrap()] != usize::MAX {
        chain.push(prev[*chain.last().unwrap()]);
    }
    chain.reverse();
    chain
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliqueChromatic {
    pub clique_number: usize,
    pub chromatic_number: usize,
    /// A maximum clique, one vertex per class of a longest chain.
    pub clique: Vec<usize>,
}

/// Clique number from the longest chain; chromatic number certified by
/// coloring each vertex with its rank, which is proper because adjacent
/// vertices always differ in rank.
pub fn clique_and_chromatic(g: &RelationGraph) -> Result<CliqueChromatic> {
    let chain = longest_chain(g, |_| true);
    let clique: Vec<usize> = chain.iter().map(|&c| g.members(c)[0]).collect();
    for (c, list) in (0..g.class_count()).map(|c| (c, g.class_successors(c))) {
        if let Some(&d) = list.iter().find(|&&d| g.class(d).rank() == g.class(c).rank()) {
            return Err(Error::Certificate(format!("classes {c} and {d} are adjacent with equal rank")));
        }
    }
    let colors: BTreeSet<usize> = (0..g.class_count())
        .filter(|&c| !g.members(c).is_empty())
        .map(|c| g.class(c).rank())
        .collect();
    if colors.len() != clique.len() {
        return Err(Error::Certificate(format!(
            "rank coloring uses {} colors but the largest clique has {}",
            colors.len(),
            clique.len()
        )));
    }
    Ok(CliqueChromatic { clique_number: clique.len(), chromatic_number: colors.len(), clique })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Girth {
    Cycle { length: usize, witness: Vec<usize> },
    Acyclic,
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Cycle { length, .. } => write!(f, "{length}"),
            Girth::Acyclic => write!(f, "acyclic"),
        }
    }
}

impl Girth {
    pub fn length(&self) -> Option<usize> {
        match self {
            Girth::Cycle { length, .. } => Some(*length),
            Girth::Acyclic => None,
        }
    }
}

/// The vertex of the matrix `E_r` (or of its ideal in a quotient graph).
fn rank_marker(g: &RelationGraph, r: usize) -> Result<usize> {
    g.vertex_of(&Matrix::elementary(&Elementary::RankMarker(r), g.n(), g.field())?)
}

/// Shortest cycle. For `n >= 2` the triangle `E_0, E_1, E_n` is exhibited;
/// otherwise a BFS from every vertex finds the girth.
pub fn girth(g: &RelationGraph) -> Result<Girth> {
    let n = g.n();
    if n >= 2 {
        let witness = vec![rank_marker(g, 0)?, rank_marker(g, 1)?, rank_marker(g, n)?];
        let [a, b, c] = [witness[0], witness[1], witness[2]];
        if g.adjacent(a, b) && g.adjacent(b, c) && g.adjacent(a, c) {
            return Ok(Girth::Cycle { length: 3, witness });
        }
        return Err(Error::Certificate("E_0, E_1, E_n do not form a triangle".into()));
    }
    Ok(bfs_girth(&g.adjacency_lists()))
}

/// Girth of an undirected graph by BFS from every vertex.
pub fn bfs_girth(adj: &[Vec<usize>]) -> Girth {
    let count = adj.len();
    let mut best: Option<(usize, usize, usize, usize)> = None; // (length, root, u, w)
    for s in 0..count {
        let mut dist = vec![usize::MAX; count];
        let mut parent = vec![usize::MAX; count];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    let len = dist[u] + dist[w] + 1;
                    if best.is_none_or(|b| len < b.0) {
                        best = Some((len, s, u, w));
                    }
                }
            }
        }
    }
    let Some((length, s, u, w)) = best else {
        return Girth::Acyclic;
    };
    // rebuild the closed walk through the root; at the minimum it is a cycle
    let path_to = |mut x: usize| {
        let mut dist = vec![usize::MAX; count];
        let mut parent = vec![usize::MAX; count];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(a) = queue.pop_front() {
            for &b in &adj[a] {
                if dist[b] == usize::MAX {
                    dist[b] = dist[a] + 1;
                    parent[b] = a;
                    queue.push_back(b);
                }
            }
        }
        let mut path = vec![x];
        while x != s {
            x = parent[x];
            path.push(x);
        }
        path
    };
    let mut witness = path_to(u);
    witness.reverse();
    let mut back = path_to(w);
    back.pop();
    witness.extend(back);
    witness.dedup();
    Girth::Cycle { length, witness }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Metric {
    pub diameter: u32,
    pub radius: u32,
    /// Eccentricity of each class's members.
    pub class_eccentricity: Vec<u32>,
    /// Distinct eccentricities seen at each rank.
    pub rank_eccentricity: Vec<(usize, Vec<u32>)>,
}

impl Metric {
    pub fn eccentricity(&self, g: &RelationGraph, v: usize) -> u32 {
        self.class_eccentricity[g.class_of(v)]
    }
}

/// Diameter, radius and eccentricities via BFS on the class graph.
pub fn metric(g: &RelationGraph) -> Result<Metric> {
    let c = g.class_count();
    let occupied: Vec<usize> = (0..c).filter(|&k| !g.members(k).is_empty()).collect();
    let mut class_eccentricity = vec![0u32; c];
    for &start in &occupied {
        let mut dist = vec![u32::MAX; c];
        dist[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(a) = queue.pop_front() {
            for &b in g.class_predecessors(a).iter().chain(g.class_successors(a)) {
                if dist[b] == u32::MAX && !g.members(b).is_empty() {
                    dist[b] = dist[a] + 1;
                    queue.push_back(b);
                }
            }
        }
        let mut ecc = 0;
        for &k in &occupied {
            if dist[k] == u32::MAX {
                return Err(Error::Disconnected);
            }
            ecc = ecc.max(dist[k]);
        }
        if g.members(start).len() > 1 {
            // two members of one class meet through any common neighbor
            if occupied.len() == 1 {
                return Err(Error::Disconnected);
            }
            ecc = ecc.max(2);
        }
        class_eccentricity[start] = ecc;
    }
    let diameter = occupied.iter().map(|&k| class_eccentricity[k]).max().unwrap_or(0);
    let radius = occupied.iter().map(|&k| class_eccentricity[k]).min().unwrap_or(0);
    let mut by_rank: BTreeMap<usize, BTreeSet<u32>> = BTreeMap::new();
    for &k in &occupied {
        by_rank.entry(g.class(k).rank()).or_default().insert(class_eccentricity[k]);
    }
    let rank_eccentricity = by_rank.into_iter().map(|(r, s)| (r, s.into_iter().collect())).collect();
    Ok(Metric { diameter, radius, class_eccentricity, rank_eccentricity })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Domination {
    pub number: usize,
    pub witness: usize,
}

/// Domination number 1, certified by a vertex adjacent to all others
/// (the zero matrix when present). Graphs without a universal vertex are
/// outside what this routine decides.
pub fn domination_number(g: &RelationGraph) -> Result<Domination> {
    let total = g.vertex_count() as u64;
    let universal = |v: usize| g.degrees(v).degree + 1 == total;
    let zero = rank_marker(g, 0)?;
    let witness = if universal(zero) {
        Some(zero)
    } else {
        (0..g.class_count()).filter_map(|c| g.members(c).first().copied()).find(|&v| universal(v))
    };
    match witness {
        Some(witness) => Ok(Domination { number: 1, witness }),
        None => Err(Error::Certificate("no vertex is adjacent to every other vertex".into())),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrongMetricDimension {
    pub value: u64,
    /// Vertices of the reduced graph (closed-neighborhood classes).
    pub reduced_vertices: u64,
    pub reduced_clique_number: usize,
}

/// `|V| - omega(reduced graph)`, valid for graphs of diameter 2.
///
/// Two distinct vertices have equal closed neighborhoods only if both sit in
/// singleton classes whose closed class-neighborhoods agree (a second member
/// of a class is a non-neighbor that every neighbor of the class sees). So
/// the reduced graph merges such singleton classes, and its clique number is
/// a longest chain through one representative per merged group.
pub fn strong_metric_dimension(g: &RelationGraph, metric: &Metric) -> Result<StrongMetricDimension> {
    if metric.diameter != 2 {
        return Err(Error::Precondition(format!("diameter is {}, not 2", metric.diameter)));
    }
    let mut groups: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    let mut merged_away = 0u64;
    for c in (0..g.class_count()).filter(|&c| g.members(c).len() == 1) {
        let mut closed: Vec<usize> =
            g.class_predecessors(c).iter().chain(g.class_successors(c)).copied().chain([c]).collect();
        closed.sort_unstable();
        groups.entry(closed).or_default().push(c);
    }
    let mut representative = vec![true; g.class_count()];
    for members in groups.values() {
        for &c in &members[1..] {
            representative[c] = false;
            merged_away += 1;
        }
    }
    let chain = longest_chain(g, |c| representative[c]);
    let total = g.vertex_count() as u64;
    Ok(StrongMetricDimension {
        value: total - chain.len() as u64,
        reduced_vertices: total - merged_away,
        reduced_clique_number: chain.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Eulerian {
    pub eulerian: bool,
    /// An odd-degree vertex and its degree, if any.
    pub witness: Option<(usize, u64)>,
}

/// A connected graph is Eulerian iff every degree is even. The zero matrix
/// is tried first, then a full-rank vertex, then every class.
pub fn eulerian_check(g: &RelationGraph) -> Result<Eulerian> {
    let odd = |v: usize| g.degrees(v).degree % 2 == 1;
    let zero = rank_marker(g, 0)?;
    let top = rank_marker(g, g.n())?;
    let witness = [zero, top]
        .into_iter()
        .chain((0..g.class_count()).filter_map(|c| g.members(c).first().copied()))
        .find(|&v| odd(v))
        .map(|v| (v, g.degrees(v).degree));
    Ok(Eulerian { eulerian: witness.is_none(), witness })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct K33 {
    pub left: [usize; 3],
    pub right: [usize; 3],
}

/// A `K_{3,3}` subgraph of the full graph, `n >= 2`: the three lines through
/// `e_1`, `e_2`, `e_1 + e_2` against three distinct generators of
/// `span(e_1, e_2)`.
pub fn k33_witness(g: &RelationGraph) -> Result<K33> {
    let n = g.n();
    if n < 2 {
        return Err(Error::Precondition(format!("K_3,3 witness needs n >= 2, got n = {n}")));
    }
    if g.kind() != GraphKind::Full {
        return Err(Error::Precondition("K_3,3 witness lives in the full graph".into()));
    }
    let f = g.field();
    let e = |i: usize| {
        let mut v = vec![f.zero(); n];
        v[i] = f.one();
        v
    };
    let e11: Vec<_> = e(0).iter().zip(e(1)).map(|(&a, b)| f.add(a, b)).collect();
    let vertex = |rows: Vec<Vec<_>>| -> Result<usize> { g.vertex_of(&Matrix::elementary(&Elementary::Stacked(rows), n, f)?) };
    let left = [vertex(vec![e(0)])?, vertex(vec![e(1)])?, vertex(vec![e11.clone()])?];
    let right = [vertex(vec![e(0), e(1)])?, vertex(vec![e(1), e(0)])?, vertex(vec![e11, e(0)])?];
    let all: BTreeSet<usize> = left.iter().chain(&right).copied().collect();
    if all.len() != 6 {
        return Err(Error::Certificate("witness vertices are not distinct".into()));
    }
    for &u in &left {
        for &v in &right {
            if !g.adjacent(u, v) {
                return Err(Error::Certificate(format!("missing edge {u} -- {v}")));
            }
        }
    }
    Ok(K33 { left, right })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Match,
    Mismatch,
    NotApplicable,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Match => "match",
            Status::Mismatch => "MISMATCH",
            Status::NotApplicable => "n/a (n<2)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Row {
    pub name: &'static str,
    pub predicted: Option<String>,
    pub computed: String,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub n: usize,
    pub q: u32,
    pub vertices: usize,
    pub clique_number: usize,
    pub chromatic_number: usize,
    pub girth: Girth,
    pub diameter: u32,
    pub radius: u32,
    pub rank_eccentricity: Vec<(usize, Vec<u32>)>,
    pub domination_number: usize,
    pub domination_witness: usize,
    /// `Err` text when the diameter-2 precondition fails.
    pub strong_metric_dimension: std::result::Result<StrongMetricDimension, String>,
    pub eulerian: bool,
    pub odd_vertex: Option<(usize, u64)>,
    pub planarity_witness: Option<K33>,
}

impl InvariantReport {
    pub fn compute(g: &RelationGraph) -> Result<InvariantReport> {
        let cc = clique_and_chromatic(g)?;
        let metric = metric(g)?;
        let dom = domination_number(g)?;
        let sdim = strong_metric_dimension(g, &metric).map_err(|e| e.to_string());
        let euler = eulerian_check(g)?;
        let planarity_witness = if g.n() >= 2 && g.kind() == GraphKind::Full { Some(k33_witness(g)?) } else { None };
        Ok(InvariantReport {
            n: g.n(),
            q: g.field().q(),
            vertices: g.vertex_count(),
            clique_number: cc.clique_number,
            chromatic_number: cc.chromatic_number,
            girth: girth(g)?,
            diameter: metric.diameter,
            radius: metric.radius,
            rank_eccentricity: metric.rank_eccentricity,
            domination_number: dom.number,
            domination_witness: dom.witness,
            strong_metric_dimension: sdim,
            eulerian: euler.eulerian,
            odd_vertex: euler.witness,
            planarity_witness,
        })
    }

    /// Predicted-versus-computed rows. Closed forms assume `n >= 2`, except
    /// the Eulerian row which holds for every `n`.
    pub fn rows(&self) -> Vec<Row> {
        let n = self.n;
        let applies = n >= 2;
        let q_pow = (self.q as u64).checked_pow((n * n) as u32);
        let row = |name, predicted: String, computed: String, always: bool| {
            let status = if !(applies || always) {
                Status::NotApplicable
            } else if predicted == computed {
                Status::Match
            } else {
                Status::Mismatch
            };
            Row { name, predicted: (applies || always).then_some(predicted), computed, status }
        };
        let ecc = |r: usize| {
            self.rank_eccentricity
                .iter()
                .find(|(k, _)| *k == r)
                .map(|(_, v)| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
                .unwrap_or_else(|| "-".into())
        };
        let mut rows = vec![
            row("clique_number", (n + 1).to_string(), self.clique_number.to_string(), false),
            row("chromatic_number", (n + 1).to_string(), self.chromatic_number.to_string(), false),
            row("girth", "3".into(), self.girth.to_string(), false),
            row("diameter", "2".into(), self.diameter.to_string(), false),
            row("radius", "1".into(), self.radius.to_string(), false),
            row("eccentricity_rank0", "1".into(), ecc(0), false),
        ];
        for r in 1..=n {
            rows.push(row(
                ["eccentricity_rank1", "eccentricity_rank2", "eccentricity_rank3", "eccentricity_rank4"]
                    .get(r - 1)
                    .copied()
                    .unwrap_or("eccentricity_rank_high"),
                "2".into(),
                ecc(r),
                false,
            ));
        }
        rows.push(row("domination_number", "1".into(), self.domination_number.to_string(), false));
        let sdim = match &self.strong_metric_dimension {
            Ok(s) => s.value.to_string(),
            Err(_) => "undefined".into(),
        };
        let predicted_sdim = q_pow.map_or("overflow".into(), |v| (v - n as u64 - 1).to_string());
        rows.push(row("strong_metric_dimension", predicted_sdim, sdim, false));
        rows.push(row("eulerian", "false".into(), self.eulerian.to_string(), true));
        rows
    }

    pub fn all_match(&self) -> bool {
        self.rows().iter().all(|r| r.status != Status::Mismatch)
    }

    /// Aligned text table.
    pub fn to_text(&self) -> String {
        let rows = self.rows();
        let w = rows.iter().map(|r| r.name.len()).max().unwrap_or(0).max(9);
        let mut s = format!("{:<w$}  {:>12}  {:>12}  status\n", "invariant", "predicted", "computed");
        for r in &rows {
            s.push_str(&format!(
                "{:<w$}  {:>12}  {:>12}  {}\n",
                r.name,
                r.predicted.as_deref().unwrap_or("-"),
                r.computed,
                r.status
            ));
        }
        if let Some((v, d)) = self.odd_vertex {
            s.push_str(&format!("odd-degree vertex: {v} (degree {d})\n"));
        }
        if let Some(k) = &self.planarity_witness {
            s.push_str(&format!("K_3,3 witness: {:?} | {:?}\n", k.left, k.right));
        }
        if let Ok(sd) = &self.strong_metric_dimension {
            s.push_str(&format!(
                "reduced graph: {} vertices, clique number {}\n",
                sd.reduced_vertices, sd.reduced_clique_number
            ));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn full(n: usize, p: u32, m: u32) -> RelationGraph {
        RelationGraph::full(n, &Field::new(p, m, None).unwrap(), false, 1 << 20).unwrap()
    }

    fn bfs(adj: &[Vec<usize>], s: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; adj.len()];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Maximum clique by plain Bron-Kerbosch.
    fn max_clique(adj: &[Vec<usize>]) -> usize {
        fn rec(adj: &[Vec<usize>], r: usize, p: Vec<usize>, mut x: Vec<usize>, best: &mut usize) {
            if p.is_empty() && x.is_empty() {
                *best = (*best).max(r);
                return;
            }
            let mut p = p;
            while let Some(v) = p.pop() {
                let np = p.iter().copied().filter(|w| adj[v].contains(w)).collect();
                let nx = x.iter().copied().filter(|w| adj[v].contains(w)).collect();
                rec(adj, r + 1, np, nx, best);
                x.push(v);
            }
        }
        let mut best = 0;
        rec(adj, 0, (0..adj.len()).collect(), Vec::new(), &mut best);
        best
    }

    /// Whether `w` strongly resolves `u` and `v`.
    fn strongly_resolves(d: &[Vec<u32>], w: usize, u: usize, v: usize) -> bool {
        d[w][u] == d[w][v] + d[v][u] || d[w][v] == d[w][u] + d[u][v]
    }

    fn is_strong_resolving(d: &[Vec<u32>], set: &[usize]) -> bool {
        let count = d.len();
        (0..count).all(|u| ((u + 1)..count).all(|v| set.iter().any(|&w| strongly_resolves(d, w, u, v))))
    }

    #[test]
    fn clique_chromatic_examples() {
        let cc = clique_and_chromatic(&full(2, 2, 1)).unwrap();
        assert_eq!((cc.clique_number, cc.chromatic_number), (3, 3));
        let cc = clique_and_chromatic(&full(3, 2, 1)).unwrap();
        assert_eq!((cc.clique_number, cc.chromatic_number), (4, 4));
        let g = full(1, 3, 1);
        let cc = clique_and_chromatic(&g).unwrap();
        assert_eq!((cc.clique_number, cc.chromatic_number), (2, 2));
        assert_eq!(max_clique(&g.adjacency_lists()), 2);
    }

    #[test]
    fn chain_equals_brute_force_clique_on_quotients() {
        for n in 1..=3 {
            for p in [2, 3] {
                let g = RelationGraph::quotient(n, &Field::prime(p).unwrap(), false, 1000).unwrap();
                let cc = clique_and_chromatic(&g).unwrap();
                assert_eq!(cc.clique_number, max_clique(&g.adjacency_lists()), "n={n} q={p}");
                for (i, &a) in cc.clique.iter().enumerate() {
                    for &b in &cc.clique[i + 1..] {
                        assert!(g.adjacent(a, b));
                    }
                }
            }
        }
    }

    #[test]
    fn girth_examples() {
        let g = full(2, 2, 1);
        let gi = girth(&g).unwrap();
        assert_eq!(gi.length(), Some(3));
        assert_eq!(bfs_girth(&g.adjacency_lists()).length(), Some(3));
        assert_eq!(girth(&full(1, 2, 1)).unwrap(), Girth::Acyclic);
        assert_eq!(girth(&full(1, 5, 1)).unwrap(), Girth::Acyclic);
        assert_eq!(Girth::Acyclic.to_string(), "acyclic");
    }

    #[test]
    fn bfs_girth_on_small_cycles() {
        // C_5 plus a pendant vertex
        let adj = vec![vec![1, 4, 5], vec![0, 2], vec![1, 3], vec![2, 4], vec![3, 0], vec![0]];
        match bfs_girth(&adj) {
            Girth::Cycle { length, witness } => {
                assert_eq!(length, 5);
                let set: BTreeSet<usize> = witness.iter().copied().collect();
                assert_eq!(set, BTreeSet::from([0, 1, 2, 3, 4]));
            }
            Girth::Acyclic => panic!("cycle expected"),
        }
        assert_eq!(bfs_girth(&[vec![1], vec![0, 2], vec![1]]), Girth::Acyclic);
    }

    #[test]
    fn metric_matches_vertex_bfs() {
        for (n, p) in [(1, 2), (1, 5), (2, 2), (2, 3)] {
            let g = full(n, p, 1);
            let adj = g.adjacency_lists();
            let m = metric(&g).unwrap();
            let ecc: Vec<u32> = (0..adj.len()).map(|v| *bfs(&adj, v).iter().max().unwrap()).collect();
            for v in 0..adj.len() {
                assert_eq!(m.eccentricity(&g, v), ecc[v], "n={n} q={p} v={v}");
            }
            assert_eq!(m.diameter, *ecc.iter().max().unwrap());
            assert_eq!(m.radius, *ecc.iter().min().unwrap());
        }
        let m = metric(&full(2, 2, 1)).unwrap();
        assert_eq!((m.diameter, m.radius), (2, 1));
        assert_eq!(m.rank_eccentricity, vec![(0, vec![1]), (1, vec![2]), (2, vec![2])]);
        assert_eq!(metric(&full(1, 2, 1)).unwrap().diameter, 1);
    }

    #[test]
    fn domination_examples() {
        for g in [full(2, 2, 1), full(3, 2, 1), full(1, 2, 1)] {
            let d = domination_number(&g).unwrap();
            assert_eq!(d, Domination { number: 1, witness: 0 });
        }
    }

    #[test]
    fn strong_metric_dimension_examples() {
        for (n, p, expected) in [(2, 2, 13), (2, 3, 78), (3, 2, 508)] {
            let g = full(n, p, 1);
            let m = metric(&g).unwrap();
            assert_eq!(strong_metric_dimension(&g, &m).unwrap().value, expected);
        }
        let g = full(1, 2, 1);
        assert!(strong_metric_dimension(&g, &metric(&g).unwrap()).is_err());
        // star K_{1,3}: sdim 2
        let g = full(1, 2, 2);
        assert_eq!(strong_metric_dimension(&g, &metric(&g).unwrap()).unwrap().value, 2);
    }

    #[test]
    fn reduced_graph_by_closed_neighborhoods() {
        for (n, p) in [(2, 2), (1, 5), (2, 3)] {
            let g = full(n, p, 1);
            let adj = g.adjacency_lists();
            let mut keys: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
            for (v, list) in adj.iter().enumerate() {
                let mut closed = list.clone();
                closed.push(v);
                closed.sort_unstable();
                keys.entry(closed).or_default().push(v);
            }
            let reps: Vec<usize> = keys.values().map(|vs| vs[0]).collect();
            let reduced: Vec<Vec<usize>> = reps
                .iter()
                .map(|&a| (0..reps.len()).filter(|&j| adj[a].contains(&reps[j])).collect())
                .collect();
            let s = strong_metric_dimension(&g, &metric(&g).unwrap()).unwrap();
            assert_eq!(s.reduced_vertices, reps.len() as u64);
            assert_eq!(s.reduced_clique_number, max_clique(&reduced));
            assert_eq!(s.reduced_clique_number, clique_and_chromatic(&g).unwrap().clique_number);
        }
    }

    #[test]
    fn strong_resolving_sets_by_definition() {
        // n = 2, q = 2: the complement of a maximum clique resolves, and no 12-set does
        let g = full(2, 2, 1);
        let adj = g.adjacency_lists();
        let d: Vec<Vec<u32>> = (0..16).map(|v| bfs(&adj, v)).collect();
        let clique = clique_and_chromatic(&g).unwrap().clique;
        let complement: Vec<usize> = (0..16).filter(|v| !clique.contains(v)).collect();
        assert_eq!(complement.len(), 13);
        assert!(is_strong_resolving(&d, &complement));
        let mut found_smaller = false;
        for mask in 0u32..(1 << 16) {
            if mask.count_ones() == 12 {
                let set: Vec<usize> = (0..16).filter(|&v| mask & (1 << v) != 0).collect();
                found_smaller |= is_strong_resolving(&d, &set);
            }
        }
        assert!(!found_smaller);
    }

    #[test]
    fn eulerian_examples() {
        let e = eulerian_check(&full(2, 2, 1)).unwrap();
        assert_eq!((e.eulerian, e.witness), (false, Some((0, 15))));
        let g = full(2, 3, 1);
        let e = eulerian_check(&g).unwrap();
        let (v, d) = e.witness.unwrap();
        assert_eq!((g.rank_of(v), d), (2, 33));
        let e = eulerian_check(&full(1, 2, 1)).unwrap();
        assert!(!e.eulerian);
        assert_eq!(e.witness.unwrap().1, 1);
    }

    #[test]
    fn k33_examples() {
        for (n, p) in [(2, 2), (3, 2), (2, 3)] {
            let g = full(n, p, 1);
            let k = k33_witness(&g).unwrap();
            for &u in &k.left {
                for &v in &k.right {
                    assert!(g.adjacency_lists()[u].contains(&v));
                }
            }
        }
        assert!(k33_witness(&full(1, 2, 1)).is_err());
    }

    #[test]
    fn report_rows() {
        let r = InvariantReport::compute(&full(2, 2, 1)).unwrap();
        assert!(r.all_match(), "{}", r.to_text());
        let r = InvariantReport::compute(&full(1, 2, 1)).unwrap();
        assert!(r.all_match());
        assert!(r.rows().iter().any(|row| row.status == Status::NotApplicable));
        assert!(r.to_text().contains("n/a (n<2)"));
    }
}
