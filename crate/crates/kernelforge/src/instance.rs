//! Instance model and text formats.
//!
//! Set instances (`p hs` / `p sp` headers) carry a family of non-empty sets of
//! size at most `d` over the ground set `1..=n`, plus the solution budget `k`.
//! Graph instances (`p gr`) carry an edge list over vertices `1..=n`. Lines
//! starting with `c` are comments; body lines follow the header, one set or
//! edge per line. Sets are kept sorted internally, family order is preserved,
//! and duplicates are permitted.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::sets::canonicalize;

/// Which set problem a family instance encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetKind {
    HittingSet,
    SetPacking,
}

impl SetKind {
    pub fn token(self) -> &'static str {
        match self {
            SetKind::HittingSet => "hs",
            SetKind::SetPacking => "sp",
        }
    }
}

/// A set-family instance: find a size-`k` hitting set of `family`, or a
/// size-`k` packing of pairwise disjoint members, depending on `kind`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub kind: SetKind,
    pub d: u32,
    pub n: u32,
    pub k: u32,
    pub family: Vec<Vec<u32>>,
}

/// An undirected simple graph with a solution budget `k`. Edges are stored
/// canonically as `(u, v)` with `u < v`, in input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphInstance {
    pub n: u32,
    pub k: u32,
    pub edges: Vec<(u32, u32)>,
}

/// Result of parsing a file whose header decides the instance type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyInstance {
    Sets(Instance),
    Graph(GraphInstance),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("missing problem header")]
    MissingHeader,
    #[error("line {line}: malformed header")]
    MalformedHeader { line: usize },
    #[error("line {line}: malformed set line")]
    MalformedSet { line: usize },
    #[error("line {line}: empty set")]
    EmptySet { line: usize },
    #[error("line {line}: element {id} out of range 1..={n}")]
    ElementOutOfRange { line: usize, id: u64, n: u32 },
    #[error("line {line}: set has {size} elements, limit is d={d}")]
    SetTooLarge { line: usize, size: usize, d: u32 },
    #[error("line {line}: malformed edge line")]
    MalformedEdge { line: usize },
    #[error("line {line}: vertex {id} out of range 1..={n}")]
    VertexOutOfRange { line: usize, id: u64, n: u32 },
    #[error("line {line}: self-loop at vertex {v}")]
    SelfLoop { line: usize, v: u32 },
    #[error("line {line}: duplicate edge {u} {v}")]
    DuplicateEdge { line: usize, u: u32, v: u32 },
    #[error("expected {expected} body lines, found {found}")]
    MissingBody { expected: usize, found: usize },
    #[error("line {line}: trailing content after body")]
    TrailingContent { line: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("infeasible generator parameters: {0}")]
    Infeasible(String),
}

fn is_comment(line: &str) -> bool {
    let t = line.trim_start();
    t == "c" || (t.starts_with('c') && t[1..].starts_with(char::is_whitespace))
}

/// Parses either instance format, dispatching on the `p hs|sp|gr` header.
pub fn parse_instance(text: &str) -> Result<AnyInstance, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    // Header: first line that is neither comment nor blank.
    let (header_line, header) = loop {
        match lines.next() {
            None => return Err(ParseError::MissingHeader),
            Some((no, l)) => {
                if is_comment(l) || l.trim().is_empty() {
                    continue;
                }
                break (no, l);
            }
        }
    };

    let tok: Vec<&str> = header.split_whitespace().collect();
    let bad = ParseError::MalformedHeader { line: header_line };
    if tok.len() < 2 || tok[0] != "p" {
        return Err(bad);
    }
    match tok[1] {
        "hs" | "sp" => {
            if tok.len() != 6 {
                return Err(bad);
            }
            let d: u32 = tok[2].parse().map_err(|_| bad.clone())?;
            let n: u32 = tok[3].parse().map_err(|_| bad.clone())?;
            let m: u32 = tok[4].parse().map_err(|_| bad.clone())?;
            let k: u32 = tok[5].parse().map_err(|_| bad.clone())?;
            if d == 0 || n == 0 {
                return Err(bad);
            }
            let kind = if tok[1] == "hs" { SetKind::HittingSet } else { SetKind::SetPacking };
            let family = parse_set_body(&mut lines, m as usize, d, n)?;
            Ok(AnyInstance::Sets(Instance { kind, d, n, k, family }))
        }
        "gr" => {
            if tok.len() != 5 {
                return Err(bad);
            }
            let n: u32 = tok[2].parse().map_err(|_| bad.clone())?;
            let m: u32 = tok[3].parse().map_err(|_| bad.clone())?;
            let k: u32 = tok[4].parse().map_err(|_| bad.clone())?;
            if n == 0 {
                return Err(bad);
            }
            let edges = parse_edge_body(&mut lines, m as usize, n)?;
            Ok(AnyInstance::Graph(GraphInstance { n, k, edges }))
        }
        _ => Err(bad),
    }
}

fn parse_set_body<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    m: usize,
    d: u32,
    n: u32,
) -> Result<Vec<Vec<u32>>, ParseError> {
    let mut family = Vec::with_capacity(m);
    while family.len() < m {
        let (line, raw) = match lines.next() {
            Some(x) => x,
            None => return Err(ParseError::MissingBody { expected: m, found: family.len() }),
        };
        if is_comment(raw) {
            continue;
        }
        let mut elems = Vec::new();
        for t in raw.split_whitespace() {
            let id: u64 = t.parse().map_err(|_| ParseError::MalformedSet { line })?;
            if id == 0 || id > n as u64 {
                return Err(ParseError::ElementOutOfRange { line, id, n });
            }
            elems.push(id as u32);
        }
        if elems.is_empty() {
            return Err(ParseError::EmptySet { line });
        }
        let set = canonicalize(elems);
        if set.len() > d as usize {
            return Err(ParseError::SetTooLarge { line, size: set.len(), d });
        }
        family.push(set);
    }
    expect_no_trailing(lines)?;
    Ok(family)
}

fn parse_edge_body<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    m: usize,
    n: u32,
) -> Result<Vec<(u32, u32)>, ParseError> {
    let mut edges = Vec::with_capacity(m);
    let mut seen = BTreeSet::new();
    while edges.len() < m {
        let (line, raw) = match lines.next() {
            Some(x) => x,
            None => return Err(ParseError::MissingBody { expected: m, found: edges.len() }),
        };
        if is_comment(raw) {
            continue;
        }
        let tok: Vec<&str> = raw.split_whitespace().collect();
        if tok.len() != 3 || tok[0] != "e" {
            return Err(ParseError::MalformedEdge { line });
        }
        let mut pair = [0u32; 2];
        for (slot, t) in pair.iter_mut().zip(&tok[1..]) {
            let id: u64 = t.parse().map_err(|_| ParseError::MalformedEdge { line })?;
            if id == 0 || id > n as u64 {
                return Err(ParseError::VertexOutOfRange { line, id, n });
            }
            *slot = id as u32;
        }
        let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
        if u == v {
            return Err(ParseError::SelfLoop { line, v: u });
        }
        if !seen.insert((u, v)) {
            return Err(ParseError::DuplicateEdge { line, u, v });
        }
        edges.push((u, v));
    }
    expect_no_trailing(lines)?;
    Ok(edges)
}

fn expect_no_trailing<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
) -> Result<(), ParseError> {
    for (line, raw) in lines {
        if !is_comment(raw) && !raw.trim().is_empty() {
            return Err(ParseError::TrailingContent { line });
        }
    }
    Ok(())
}

/// Serializes either instance type back to its text format. Round-trips
/// bit-exactly with [`parse_instance`].
pub fn serialize_instance(inst: &AnyInstance) -> String {
    match inst {
        AnyInstance::Sets(i) => i.to_text(),
        AnyInstance::Graph(g) => g.to_text(),
    }
}

impl Instance {
    pub fn m(&self) -> usize {
        self.family.len()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "p {} {} {} {} {}\n",
            self.kind.token(),
            self.d,
            self.n,
            self.family.len(),
            self.k
        );
        for set in &self.family {
            let mut first = true;
            for e in set {
                if !first {
                    out.push(' ');
                }
                out.push_str(&e.to_string());
                first = false;
            }
            out.push('\n');
        }
        out
    }

    /// The fixed unsolvable hitting-set instance: one set, budget zero.
    pub fn hs_no_instance(d: u32) -> Instance {
        Instance { kind: SetKind::HittingSet, d, n: 1, k: 0, family: vec![vec![1]] }
    }

    /// The fixed unsolvable packing instance: empty family, budget one.
    pub fn sp_no_instance(d: u32) -> Instance {
        Instance { kind: SetKind::SetPacking, d, n: 1, k: 1, family: vec![] }
    }
}

impl GraphInstance {
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("p gr {} {} {}\n", self.n, self.edges.len(), self.k);
        for (u, v) in &self.edges {
            out.push_str(&format!("e {u} {v}\n"));
        }
        out
    }

    /// The fixed unsolvable instance: a single edge, budget zero.
    pub fn no_instance() -> GraphInstance {
        GraphInstance { n: 2, k: 0, edges: vec![(1, 2)] }
    }
}

/// Renames elements to `1..=n'` in order of first occurrence in the family
/// stream (sets scanned in order, each in increasing element order) and
/// returns the renaming. `n'` is the number of distinct elements used, with a
/// floor of 1 so the header stays valid for empty families.
pub fn canonical_relabel_with_map(inst: &Instance) -> (Instance, BTreeMap<u32, u32>) {
    let mut map = BTreeMap::new();
    let mut next = 1u32;
    for set in &inst.family {
        for &e in set {
            if !map.contains_key(&e) {
                map.insert(e, next);
                next += 1;
            }
        }
    }
    let family = inst
        .family
        .iter()
        .map(|set| canonicalize(set.iter().map(|e| map[e]).collect()))
        .collect();
    let relabeled = Instance {
        kind: inst.kind,
        d: inst.d,
        n: (next - 1).max(1),
        k: inst.k,
        family,
    };
    (relabeled, map)
}

/// [`canonical_relabel_with_map`] without the map.
pub fn canonical_relabel(inst: &Instance) -> Instance {
    canonical_relabel_with_map(inst).0
}

/// Graph analogue of [`canonical_relabel`]: vertices are renamed by first
/// occurrence in the edge stream (each edge scanned as `u` then `v`).
pub fn canonical_relabel_graph(g: &GraphInstance) -> GraphInstance {
    let mut map = BTreeMap::new();
    let mut next = 1u32;
    for &(u, v) in &g.edges {
        for e in [u, v] {
            if !map.contains_key(&e) {
                map.insert(e, next);
                next += 1;
            }
        }
    }
    let edges = g
        .edges
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (map[&u], map[&v]);
            (a.min(b), a.max(b))
        })
        .collect();
    GraphInstance { n: (next - 1).max(1), k: g.k, edges }
}

/// Draws `m` sets independently: size uniform in `1..=d`, then elements
/// without replacement from `1..=n`. Deterministic for a fixed seed.
pub fn gen_set_instance(
    kind: SetKind,
    d: u32,
    n: u32,
    m: u32,
    k: u32,
    seed: u64,
) -> Result<Instance, GenError> {
    if d == 0 || n == 0 || d > n {
        return Err(GenError::Infeasible(format!("need 1 <= d <= n, got d={d} n={n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut family = Vec::with_capacity(m as usize);
    for _ in 0..m {
        let s = rng.gen_range(1..=d) as usize;
        let mut set: Vec<u32> = rand::seq::index::sample(&mut rng, n as usize, s)
            .iter()
            .map(|i| i as u32 + 1)
            .collect();
        set.sort_unstable();
        family.push(set);
    }
    Ok(Instance { kind, d, n, k, family })
}

/// Draws `m` distinct edges uniformly on `n` vertices. Errors when more edges
/// are requested than a simple graph can hold.
pub fn gen_graph_instance(n: u32, m: u32, k: u32, seed: u64) -> Result<GraphInstance, GenError> {
    if n == 0 {
        return Err(GenError::Infeasible("need n >= 1".into()));
    }
    let max = n as u64 * (n as u64 - 1) / 2;
    if m as u64 > max {
        return Err(GenError::Infeasible(format!(
            "requested {m} edges but only {max} exist on {n} vertices"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut edges = Vec::with_capacity(m as usize);
    while edges.len() < m as usize {
        let u = rng.gen_range(1..=n);
        let v = rng.gen_range(1..=n);
        if u == v {
            continue;
        }
        let e = (u.min(v), u.max(v));
        if seen.insert(e) {
            edges.push(e);
        }
    }
    Ok(GraphInstance { n, k, edges })
}

/// A small graph pattern for occurrence scanning, on vertices `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub n: u32,
    pub edges: Vec<(u32, u32)>,
}

impl Pattern {
    /// The triangle on three vertices.
    pub fn triangle() -> Pattern {
        Pattern { n: 3, edges: vec![(1, 2), (1, 3), (2, 3)] }
    }

    /// The path on three vertices.
    pub fn path3() -> Pattern {
        Pattern { n: 3, edges: vec![(1, 2), (2, 3)] }
    }

    /// Parses a `p pat <v>` header followed by `e i j` lines (to end of file).
    pub fn parse(text: &str) -> Result<Pattern, ParseError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (header_line, header) = loop {
            match lines.next() {
                None => return Err(ParseError::MissingHeader),
                Some((no, l)) => {
                    if is_comment(l) || l.trim().is_empty() {
                        continue;
                    }
                    break (no, l);
                }
            }
        };
        let tok: Vec<&str> = header.split_whitespace().collect();
        let bad = ParseError::MalformedHeader { line: header_line };
        if tok.len() != 3 || tok[0] != "p" || tok[1] != "pat" {
            return Err(bad);
        }
        let n: u32 = tok[2].parse().map_err(|_| bad.clone())?;
        if n == 0 {
            return Err(bad);
        }
        let mut edges = Vec::new();
        let mut seen = BTreeSet::new();
        for (line, raw) in lines {
            if is_comment(raw) || raw.trim().is_empty() {
                continue;
            }
            let tok: Vec<&str> = raw.split_whitespace().collect();
            if tok.len() != 3 || tok[0] != "e" {
                return Err(ParseError::MalformedEdge { line });
            }
            let mut pair = [0u32; 2];
            for (slot, t) in pair.iter_mut().zip(&tok[1..]) {
                let id: u64 = t.parse().map_err(|_| ParseError::MalformedEdge { line })?;
                if id == 0 || id > n as u64 {
                    return Err(ParseError::VertexOutOfRange { line, id, n });
                }
                *slot = id as u32;
            }
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v {
                return Err(ParseError::SelfLoop { line, v: u });
            }
            if !seen.insert((u, v)) {
                return Err(ParseError::DuplicateEdge { line, u, v });
            }
            edges.push((u, v));
        }
        Ok(Pattern { n, edges })
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        let e = (a.min(b), a.max(b));
        self.edges.iter().any(|&x| x == e)
    }
}

/// One or more forbidden/packed patterns; `max_size` is the arity bound `d`
/// of the occurrence family they induce.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternSet {
    pub patterns: Vec<Pattern>,
}

impl PatternSet {
    pub fn single(p: Pattern) -> PatternSet {
        PatternSet { patterns: vec![p] }
    }

    pub fn max_size(&self) -> u32 {
        self.patterns.iter().map(|p| p.n).max().unwrap_or(0)
    }
}
