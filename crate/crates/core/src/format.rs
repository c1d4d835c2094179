//! Plain-text formats.
//!
//! Every file starts with one `#` header line of `key=value` tokens that
//! records the full configuration (`n`, `p`, `m`, `modulus`, ...), so a file
//! can be read back without any other context. Field elements are written as
//! their integer codes; vertex indices are the base-q row-major encoding of
//! the matrix.
//!
//! Permutation file:
//!
//! ```text
//! # permutation n=2 p=2 m=1 modulus=0,1 directed=true vertices=16
//! 0 0
//! 1 2
//! ...
//! ```
//!
//! Decomposition report (`f = phi_P . upsilon_t . sigma`, right factor first):
//!
//! ```text
//! # decomposition n=3 p=2 m=1 modulus=0,1 vertices=512
//! P
//! 1 0 0
//! 0 1 0
//! 0 0 1
//! t 0
//! class basis=1,0,1 cycles=(5 261)(7 263)
//! ```
//!
//! A `class` line lists the nontrivial cycles of `sigma` inside the class
//! whose canonical ideal has the given RREF basis (rows separated by `;`,
//! `-` for the zero ideal).

use std::collections::BTreeMap;

use crate::aut::{cycles, perm_from_cycles, Automorphism, Decomposition};
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::graph::RelationGraph;
use crate::ideal::LeftIdeal;
use crate::matrix::Matrix;

/// `p=.. m=.. modulus=c0,c1,...`
pub fn field_header(spec: &FieldSpec) -> String {
    format!("p={} m={} modulus={}", spec.p(), spec.m(), join(spec.modulus(), ","))
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Parsed `#` header: the leading word and its `key=value` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Header {
    pub kind: String,
    pub values: BTreeMap<String, String>,
}

impl Header {
    pub fn parse(line: &str) -> Result<Header> {
        let body = line.strip_prefix('#').ok_or_else(|| parse_err(1, "missing '#' header"))?;
        let mut tokens = body.split_whitespace();
        let kind = tokens.next().ok_or_else(|| parse_err(1, "empty header"))?.to_string();
        let mut values = BTreeMap::new();
        for tok in tokens {
            let (k, v) = tok.split_once('=').ok_or_else(|| parse_err(1, format!("expected key=value, got {tok:?}")))?;
            values.insert(k.to_string(), v.to_string());
        }
        Ok(Header { kind, values })
    }

    pub fn get(&self, key: &str) -> Result<&str> {
        self.values
            .get(key)
            .map(|s| s.as_str())
            .ok_or_else(|| parse_err(1, format!("header lacks {key}")))
    }

    pub fn number<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        let raw = self.get(key)?;
        raw.parse().map_err(|_| parse_err(1, format!("{key}={raw} is not a valid number")))
    }

    pub fn expect_kind(&self, kind: &str) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(parse_err(1, format!("expected a {kind} file, found {}", self.kind)))
        }
    }

    /// Rebuilds the field named by `p`, `m` and `modulus`.
    pub fn field(&self) -> Result<Field> {
        let modulus = parse_list(self.get("modulus")?, 1)?;
        Field::new(self.number("p")?, self.number("m")?, Some(&modulus))
    }
}

fn parse_list(s: &str, line: usize) -> Result<Vec<u32>> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| parse_err(line, format!("bad number {t:?}"))))
        .collect()
}

fn parse_usize(tok: &str, line: usize) -> Result<usize> {
    tok.parse().map_err(|_| parse_err(line, format!("bad integer {tok:?}")))
}

/// Text form of a matrix: `n` on the first line, then `n` rows of element codes.
pub fn write_matrix(m: &Matrix) -> String {
    let mut s = format!("{}\n", m.n());
    for row in m.rows() {
        let codes: Vec<u32> = row.iter().map(|e| e.code()).collect();
        s.push_str(&join(&codes, " "));
        s.push('\n');
    }
    s
}

pub fn parse_matrix(text: &str, field: &Field) -> Result<Matrix> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, first) = lines.next().ok_or_else(|| parse_err(1, "empty matrix"))?;
    let n = parse_usize(first.trim(), 1)?;
    let rows: Vec<(usize, &str)> = lines.collect();
    parse_matrix_rows(n, &rows, field)
}

fn parse_matrix_rows(n: usize, rows: &[(usize, &str)], field: &Field) -> Result<Matrix> {
    if rows.len() != n {
        return Err(parse_err(rows.first().map_or(1, |r| r.0 + 1), format!("expected {n} rows, got {}", rows.len())));
    }
    let mut codes = Vec::with_capacity(n * n);
    for &(i, row) in rows {
        let parsed: Vec<u32> = row
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| parse_err(i + 1, format!("bad code {t:?}"))))
            .collect::<Result<_>>()?;
        if parsed.len() != n {
            return Err(parse_err(i + 1, format!("expected {n} entries, got {}", parsed.len())));
        }
        codes.extend(parsed);
    }
    Matrix::from_codes(n, field, &codes)
}

pub fn permutation_header(f: &Automorphism, directed: bool) -> String {
    format!(
        "# permutation n={} {} directed={} vertices={}",
        f.n(),
        field_header(f.field().spec()),
        directed,
        f.len()
    )
}

/// Header line followed by `v image` for every vertex, ascending.
pub fn write_permutation(f: &Automorphism, directed: bool) -> String {
    let mut s = permutation_header(f, directed);
    s.push('\n');
    for (v, w) in f.perm().iter().enumerate() {
        s.push_str(&format!("{v} {w}\n"));
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationFile {
    pub directed: bool,
    pub automorphism: Automorphism,
}

pub fn parse_permutation(text: &str) -> Result<PermutationFile> {
    let mut lines = text.lines().enumerate();
    let (_, head) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let header = Header::parse(head)?;
    header.expect_kind("permutation")?;
    let n: usize = header.number("n")?;
    let field = header.field()?;
    let directed: bool = header.number("directed")?;
    let vertices: usize = header.number("vertices")?;
    let mut perm = vec![usize::MAX; vertices];
    let mut expected = 0usize;
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        let (Some(v), Some(w), None) = (toks.next(), toks.next(), toks.next()) else {
            return Err(parse_err(i + 1, "expected 'v image'"));
        };
        let (v, w) = (parse_usize(v, i + 1)?, parse_usize(w, i + 1)?);
        if v != expected || v >= vertices {
            return Err(parse_err(i + 1, format!("expected vertex {expected}, found {v}")));
        }
        perm[v] = w;
        expected += 1;
    }
    if expected != vertices {
        return Err(parse_err(text.lines().count(), format!("{expected} of {vertices} vertices listed")));
    }
    let automorphism = Automorphism::from_perm(n, &field, perm)?;
    Ok(PermutationFile { directed, automorphism })
}

fn ideal_token(ideal: &LeftIdeal) -> String {
    if ideal.rank() == 0 {
        return "-".into();
    }
    ideal.basis_codes().iter().map(|row| join(row, ",")).collect::<Vec<_>>().join(";")
}

fn parse_ideal_token(tok: &str, n: usize, field: &Field, line: usize) -> Result<LeftIdeal> {
    if tok == "-" {
        return Ok(LeftIdeal::zero(n));
    }
    let rows = tok
        .split(';')
        .map(|r| {
            parse_list(r, line)?
                .into_iter()
                .map(|c| field.element(c))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let ideal = LeftIdeal::from_rows(n, &rows, field)?;
    if ideal_token(&ideal) != tok {
        return Err(parse_err(line, format!("basis {tok} is not in canonical form")));
    }
    Ok(ideal)
}

fn cycles_token(cs: &[Vec<usize>]) -> String {
    cs.iter().map(|c| format!("({})", join(c, " "))).collect()
}

fn parse_cycles_token(tok: &str, line: usize) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut rest = tok.trim();
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(|| parse_err(line, "cycle must start with '('"))?;
        let close = body.find(')').ok_or_else(|| parse_err(line, "unclosed cycle"))?;
        let cycle = body[..close]
            .split_whitespace()
            .map(|t| parse_usize(t, line))
            .collect::<Result<Vec<_>>>()?;
        if cycle.len() < 2 {
            return Err(parse_err(line, "cycles must have length at least 2"));
        }
        out.push(cycle);
        rest = body[close + 1..].trim_start();
    }
    Ok(out)
}

pub fn write_decomposition(d: &Decomposition, g: &RelationGraph) -> String {
    let sigma = &d.sigma;
    let mut s = format!(
        "# decomposition n={} {} vertices={}\nP\n",
        sigma.n(),
        field_header(sigma.field().spec()),
        sigma.len()
    );
    let block = write_matrix(&d.p);
    s.push_str(block.split_once('\n').map_or("", |(_, rows)| rows));
    s.push_str(&format!("t {}\n", d.t));
    for (class, cs) in d.sigma_cycles(g) {
        s.push_str(&format!("class basis={} cycles={}\n", ideal_token(g.class(class)), cycles_token(&cs)));
    }
    s
}

/// A decomposition report as read from disk, before its cycles are checked
/// against a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionFile {
    pub n: usize,
    pub field: Field,
    pub p: Matrix,
    pub t: u32,
    pub classes: Vec<(LeftIdeal, Vec<Vec<usize>>)>,
}

impl DecompositionFile {
    /// Checks every cycle against its class and builds the decomposition.
    pub fn into_decomposition(self, g: &RelationGraph) -> Result<Decomposition> {
        if g.n() != self.n || g.field() != &self.field {
            return Err(Error::DimensionMismatch("report and graph parameters differ".into()));
        }
        let mut all = Vec::new();
        for (ideal, cs) in self.classes {
            let c = g
                .class_index(&ideal)
                .ok_or_else(|| Error::Precondition(format!("ideal {ideal} not in graph")))?;
            for cycle in &cs {
                if let Some(&v) = cycle.iter().find(|&&v| v >= g.vertex_count() || g.class_of(v) != c) {
                    return Err(Error::Precondition(format!("vertex {v} is not in class {ideal}")));
                }
            }
            all.extend(cs);
        }
        let perm = perm_from_cycles(g.vertex_count(), &all)?;
        let mut listed = all;
        listed.sort_by_key(|c| c[0]);
        if cycles(&perm) != listed {
            return Err(Error::Precondition("each cycle must start at its least vertex".into()));
        }
        let sigma = Automorphism::from_perm(self.n, &self.field, perm)?;
        self.field.frobenius(self.field.one(), self.t)?;
        Ok(Decomposition { p: self.p, t: self.t, sigma })
    }
}

pub fn parse_decomposition(text: &str) -> Result<DecompositionFile> {
    let lines: Vec<(usize, &str)> = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()).collect();
    let (_, head) = lines.first().ok_or_else(|| parse_err(1, "empty file"))?;
    let header = Header::parse(head)?;
    header.expect_kind("decomposition")?;
    let n: usize = header.number("n")?;
    let field = header.field()?;
    let mut i = 1;
    match lines.get(i) {
        Some((_, l)) if l.trim() == "P" => i += 1,
        other => return Err(parse_err(other.map_or(2, |o| o.0 + 1), "expected 'P'")),
    }
    let rows = lines.get(i..i + n).ok_or_else(|| parse_err(i + 1, "truncated matrix block"))?;
    let p = parse_matrix_rows(n, rows, &field)?;
    i += n;
    let t = match lines.get(i).and_then(|(j, l)| l.strip_prefix("t ").map(|r| (j, r))) {
        Some((j, rest)) => rest.trim().parse().map_err(|_| parse_err(j + 1, "bad t"))?,
        None => return Err(parse_err(i + 1, "expected 't <exponent>'")),
    };
    i += 1;
    let mut classes = Vec::new();
    for &(j, line) in &lines[i..] {
        let line_no = j + 1;
        let rest = line.strip_prefix("class ").ok_or_else(|| parse_err(line_no, "expected a class line"))?;
        let (basis, cyc) = rest
            .strip_prefix("basis=")
            .and_then(|r| r.split_once(" cycles="))
            .ok_or_else(|| parse_err(line_no, "expected 'class basis=... cycles=...'"))?;
        classes.push((parse_ideal_token(basis, n, &field, line_no)?, parse_cycles_token(cyc, line_no)?));
    }
    Ok(DecompositionFile { n, field, p, t, classes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aut::{decompose, random_standard};
    use crate::seeded_rng;

    #[test]
    fn field_header_examples() {
        assert_eq!(field_header(Field::prime(2).unwrap().spec()), "p=2 m=1 modulus=0,1");
        assert_eq!(field_header(Field::new(2, 2, None).unwrap().spec()), "p=2 m=2 modulus=1,1,1");
    }

    #[test]
    fn header_roundtrip() {
        let h = Header::parse("# permutation n=2 p=3 m=1 modulus=0,1 directed=false").unwrap();
        assert_eq!(h.kind, "permutation");
        assert_eq!(h.number::<usize>("n").unwrap(), 2);
        assert_eq!(h.field().unwrap(), Field::prime(3).unwrap());
        assert!(h.get("seed").is_err());
        assert!(Header::parse("permutation n=2").is_err());
    }

    #[test]
    fn matrix_roundtrip() {
        let f = Field::prime(5).unwrap();
        let m = Matrix::from_codes(2, &f, &[1, 4, 0, 3]).unwrap();
        let text = write_matrix(&m);
        assert_eq!(text, "2\n1 4\n0 3\n");
        assert_eq!(parse_matrix(&text, &f).unwrap(), m);
        assert!(parse_matrix("2\n1 4\n", &f).is_err());
        assert!(parse_matrix("2\n1 9\n0 0\n", &f).is_err());
    }

    #[test]
    fn permutation_roundtrip_and_errors() {
        let f = Field::prime(2).unwrap();
        let g = RelationGraph::full(2, &f, true, 100).unwrap();
        let s = random_standard(&g, &mut seeded_rng(1)).unwrap();
        let text = write_permutation(&s.composite, true);
        assert!(text.starts_with("# permutation n=2 p=2 m=1 modulus=0,1 directed=true vertices=16\n"));
        let back = parse_permutation(&text).unwrap();
        assert_eq!(back.automorphism, s.composite);
        assert!(back.directed);
        assert_eq!(write_permutation(&back.automorphism, true), text);

        let truncated: String = text.lines().take(10).map(|l| format!("{l}\n")).collect();
        assert!(parse_permutation(&truncated).is_err());
        let doubled = text.replace("\n1 ", "\n1 0 #");
        assert!(parse_permutation(&doubled).is_err());
        assert!(parse_permutation("# decomposition n=2").is_err());
    }

    #[test]
    fn decomposition_roundtrip() {
        let f = Field::new(2, 2, None).unwrap();
        let g = RelationGraph::full(3, &f, true, 1 << 20).unwrap();
        let s = random_standard(&g, &mut seeded_rng(4)).unwrap();
        let d = decompose(&s.composite, &g).unwrap();
        let text = write_decomposition(&d, &g);
        let parsed = parse_decomposition(&text).unwrap();
        let back = parsed.into_decomposition(&g).unwrap();
        assert_eq!(back, d);
        assert_eq!(write_decomposition(&back, &g), text);
        assert_eq!(back.recompose().unwrap(), s.composite);
    }

    #[test]
    fn ideal_tokens() {
        let f = Field::prime(3).unwrap();
        for ideal in crate::ideal::all_ideals(3, &f) {
            let tok = ideal_token(&ideal);
            assert_eq!(parse_ideal_token(&tok, 3, &f, 1).unwrap(), ideal);
        }
        // not reduced
        assert!(parse_ideal_token("2,0,0", 3, &f, 1).is_err());
    }

    #[test]
    fn cycle_tokens() {
        assert_eq!(parse_cycles_token("(1 2 3)(4 5)", 1).unwrap(), vec![vec![1, 2, 3], vec![4, 5]]);
        assert_eq!(parse_cycles_token("", 1).unwrap(), Vec::<Vec<usize>>::new());
        assert!(parse_cycles_token("(1)", 1).is_err());
        assert!(parse_cycles_token("(1 2", 1).is_err());
    }
}
