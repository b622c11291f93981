//! Kernels for implicit families defined by small graph patterns.
//!
//! The family is never materialized: a tape position encodes a vertex subset
//! of size at most `d` (subsets ordered by size, then lexicographically), and
//! a position reads back as a member only when the subset currently matches a
//! pattern — by induced isomorphism for vertex deletion, or by containing a
//! spanning copy for packing. The enumeration cannot repeat a set, so the
//! duplicate layer of the engine is the identity.
//!
//! A kernel run keeps the surviving occurrences (their number is bounded by
//! the layer-0 cap, so the buffer is metered but small), then emits each
//! induced edge once, at the first occurrence that produces it, and renames
//! vertices by first appearance.

use std::cell::Cell;

use itertools::Itertools;
use thiserror::Error;

use crate::instance::{canonical_relabel_graph, GraphInstance, Pattern, PatternSet};
use crate::layered::Engine;
use crate::sp_logspace::packing_threshold_base;
use crate::stream::{RunReport, SpaceError, SpaceMeter, Tape};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OccurrenceError {
    #[error("occurrence index {t} beyond stream end ({available} available)")]
    BeyondEnd { t: usize, available: usize },
}

/// Bit-matrix adjacency; vertex ids are 1-based.
struct AdjMatrix {
    words_per_row: usize,
    bits: Vec<u64>,
}

impl AdjMatrix {
    fn new(g: &GraphInstance) -> AdjMatrix {
        let n = g.n as usize;
        let words_per_row = n.div_ceil(64);
        let mut bits = vec![0u64; n * words_per_row];
        for &(u, v) in &g.edges {
            for (a, b) in [(u, v), (v, u)] {
                let (a, b) = (a as usize - 1, b as usize - 1);
                bits[a * words_per_row + b / 64] |= 1 << (b % 64);
            }
        }
        AdjMatrix { words_per_row, bits }
    }

    fn has(&self, u: u32, v: u32) -> bool {
        let (a, b) = (u as usize - 1, v as usize - 1);
        self.bits[a * self.words_per_row + b / 64] >> (b % 64) & 1 == 1
    }
}

/// `C(n, r)` for all `n <= rows`, `r <= cols`, saturating.
fn binom_table(rows: usize, cols: usize) -> Vec<Vec<u64>> {
    let mut t = vec![vec![0u64; cols + 1]; rows + 1];
    for n in 0..=rows {
        t[n][0] = 1;
        for r in 1..=cols.min(n) {
            t[n][r] = t[n - 1][r - 1].saturating_add(t[n - 1][r]);
        }
    }
    t
}

/// Does `g[s]` match `p` under some vertex bijection? Induced matching
/// demands edge-for-edge equality; spanning matching only demands that every
/// pattern edge is present.
fn matches_pattern(adj: &AdjMatrix, s: &[u32], p: &Pattern, spanning: bool) -> bool {
    if s.len() != p.n as usize {
        return false;
    }
    s.iter().permutations(s.len()).any(|perm| {
        for i in 0..perm.len() {
            for j in i + 1..perm.len() {
                let wanted = p.has_edge(i as u32 + 1, j as u32 + 1);
                let got = adj.has(*perm[i], *perm[j]);
                if wanted != got && (wanted || !spanning) {
                    return false;
                }
            }
        }
        true
    })
}

/// True iff the subgraph of `g` induced by `s` is isomorphic to one of the
/// patterns.
pub fn induced_match(g: &GraphInstance, s: &[u32], patterns: &PatternSet) -> bool {
    let adj = AdjMatrix::new(g);
    patterns.patterns.iter().any(|p| matches_pattern(&adj, s, p, false))
}

/// The implicit family as a tape: vertex subsets of size `1..=d` in
/// size-then-lexicographic order, reading back as members only when they
/// match.
pub struct OccurrenceTape {
    n: u32,
    d: usize,
    patterns: PatternSet,
    spanning: bool,
    adj: AdjMatrix,
    binom: Vec<Vec<u64>>,
    len: usize,
    reads: Cell<u64>,
}

impl OccurrenceTape {
    fn new(g: &GraphInstance, patterns: PatternSet, spanning: bool) -> OccurrenceTape {
        let d = patterns.max_size() as usize;
        let binom = binom_table(g.n as usize, d);
        let len = (1..=d).map(|s| binom[g.n as usize][s] as usize).sum();
        OccurrenceTape {
            n: g.n,
            d,
            patterns,
            spanning,
            adj: AdjMatrix::new(g),
            binom,
            len,
            reads: Cell::new(0),
        }
    }

    /// Stream of induced copies of any of the patterns (vertex deletion).
    pub fn for_deletion(g: &GraphInstance, patterns: &PatternSet) -> OccurrenceTape {
        OccurrenceTape::new(g, patterns.clone(), false)
    }

    /// Stream of spanning copies of a single pattern (packing).
    pub fn for_packing(g: &GraphInstance, pattern: &Pattern) -> OccurrenceTape {
        OccurrenceTape::new(g, PatternSet::single(pattern.clone()), true)
    }

    /// Largest subset size the stream enumerates.
    pub fn arity(&self) -> usize {
        self.d
    }

    pub fn vertex_count(&self) -> u32 {
        self.n
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adj.has(u, v)
    }

    fn unrank_into(&self, t: usize, buf: &mut Vec<u32>) {
        buf.clear();
        let mut t = t as u64;
        let mut size = 0;
        for s in 1..=self.d {
            let c = self.binom[self.n as usize][s];
            if t < c {
                size = s;
                break;
            }
            t -= c;
        }
        debug_assert!(size > 0, "position beyond stream end");
        let mut next = 1u32;
        let mut remaining = size;
        while remaining > 0 {
            let c = self.binom[(self.n - next) as usize][remaining - 1];
            if t < c {
                buf.push(next);
                remaining -= 1;
            } else {
                t -= c;
            }
            next += 1;
        }
    }

    fn qualifies(&self, s: &[u32]) -> bool {
        self.patterns.patterns.iter().any(|p| matches_pattern(&self.adj, s, p, self.spanning))
    }
}

impl Tape for OccurrenceTape {
    fn raw_len(&self) -> usize {
        self.len
    }

    fn read_into(&self, t: usize, buf: &mut Vec<u32>) -> bool {
        self.reads.set(self.reads.get() + 1);
        self.unrank_into(t, buf);
        self.qualifies(buf)
    }

    fn reads(&self) -> u64 {
        self.reads.get()
    }

    fn inherent_dedup(&self) -> bool {
        true
    }
}

/// The `t`-th matching vertex set in stream order.
pub fn occurrence_at(tape: &OccurrenceTape, t: usize) -> Result<Vec<u32>, OccurrenceError> {
    let mut available = 0;
    let mut buf = Vec::new();
    for pos in 0..tape.raw_len() {
        if tape.read_into(pos, &mut buf) {
            if available == t {
                return Ok(buf);
            }
            available += 1;
        }
    }
    Err(OccurrenceError::BeyondEnd { t, available })
}

/// The occurrences layer 0 keeps at the given threshold base, in stream
/// order.
pub fn kept_occurrences(tape: &OccurrenceTape, base: u64) -> Vec<Vec<u32>> {
    let engine = Engine::new(tape, tape.d, base, tape.n as u64);
    let mut meter = SpaceMeter::new(None);
    let mut kept = Vec::new();
    let mut buf = Vec::new();
    for t in 0..tape.raw_len() {
        if engine.would_output(0, t, &mut meter) {
            tape.read_into(t, &mut buf);
            kept.push(buf.clone());
        }
    }
    kept
}

fn run_graph_kernel(
    g: &GraphInstance,
    tape: &OccurrenceTape,
    base: u64,
    budget: Option<u64>,
) -> Result<(GraphInstance, RunReport), SpaceError> {
    let engine = Engine::new(tape, tape.d, base, tape.n as u64);
    let mut meter = SpaceMeter::new(budget);
    let mut kept: Vec<Vec<u32>> = Vec::new();
    let mut buf = Vec::new();
    for t in 0..tape.raw_len() {
        meter.set("pos", t as u64);
        if engine.would_output(0, t, &mut meter) {
            tape.read_into(t, &mut buf);
            kept.push(buf.clone());
            meter.set_cursor("kept", (kept.len() * tape.d) as u64, tape.n as u64);
        }
        meter.check_budget()?;
    }

    // Emit each induced edge at its first producer; earlier kept occurrences
    // decide novelty, so no separate seen-set is needed.
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for (j, occ) in kept.iter().enumerate() {
        for (i, &u) in occ.iter().enumerate() {
            for &v in &occ[i + 1..] {
                if !tape.has_edge(u, v) {
                    continue;
                }
                let fresh = kept[..j]
                    .iter()
                    .all(|prev| !(prev.contains(&u) && prev.contains(&v)));
                if fresh {
                    edges.push((u, v));
                }
            }
        }
    }

    let report = RunReport {
        peak_bits: meter.peak_bits(),
        tape_reads: tape.reads(),
        sets_emitted: edges.len(),
    };
    let pre = GraphInstance { n: g.n, k: g.k, edges };
    Ok((canonical_relabel_graph(&pre), report))
}

/// Kernel for deleting at most `k` vertices to remove every induced copy of
/// the patterns. Thresholds use base `k + 1`.
pub fn kernelize_hfree_vd(g: &GraphInstance, patterns: &PatternSet) -> GraphInstance {
    kernelize_hfree_vd_metered(g, patterns, None).expect("unbudgeted run").0
}

/// [`kernelize_hfree_vd`] with metering and an optional hard bit budget.
pub fn kernelize_hfree_vd_metered(
    g: &GraphInstance,
    patterns: &PatternSet,
    budget: Option<u64>,
) -> Result<(GraphInstance, RunReport), SpaceError> {
    let tape = OccurrenceTape::for_deletion(g, patterns);
    run_graph_kernel(g, &tape, g.k as u64 + 1, budget)
}

/// Kernel for packing `k` vertex-disjoint copies of the pattern. Thresholds
/// use base `d(k-1) + 1`; `k = 0` passes through.
pub fn kernelize_hpack(g: &GraphInstance, pattern: &Pattern) -> GraphInstance {
    kernelize_hpack_metered(g, pattern, None).expect("unbudgeted run").0
}

/// [`kernelize_hpack`] with metering and an optional hard bit budget.
pub fn kernelize_hpack_metered(
    g: &GraphInstance,
    pattern: &Pattern,
    budget: Option<u64>,
) -> Result<(GraphInstance, RunReport), SpaceError> {
    if g.k == 0 {
        let report =
            RunReport { peak_bits: 0, tape_reads: 0, sets_emitted: g.edges.len() };
        return Ok((g.clone(), report));
    }
    let tape = OccurrenceTape::for_packing(g, pattern);
    run_graph_kernel(g, &tape, packing_threshold_base(pattern.n, g.k), budget)
}
