//! Single-pass kernels backed by a subset-counting trie.
//!
//! One pass over the (optionally pre-sorted) family: a set is stored unless
//! some subset `C` of it already has `base^(d-|C|)` stored supersets, where
//! the base is `k + 1` for hitting set and `d(k-1) + 1` for packing. Storing
//! a set bumps the counter of each of its `2^|F|` subsets; the counters live
//! in a trie whose root path spells the subset, so a lookup costs `|C|` node
//! visits and the whole run stays within `d * 2^d` visits per input set.

use std::cell::Cell;
use std::collections::BTreeMap;

use crate::instance::{canonical_relabel, Instance};
use crate::sets::for_each_subset_by_size;
use crate::sp_logspace::packing_threshold_base;

#[derive(Default)]
struct TrieNode {
    count: u64,
    children: BTreeMap<u32, TrieNode>,
}

/// Counts stored supersets for every subset of every stored set. Node labels
/// strictly increase along any root path; a missing node means count zero.
#[derive(Default)]
pub struct SupersetTrie {
    root: TrieNode,
    visits: Cell<u64>,
}

impl SupersetTrie {
    pub fn new() -> SupersetTrie {
        SupersetTrie::default()
    }

    /// Adds one to the counter of every subset of `set` (the empty set and
    /// `set` itself included), creating nodes as needed.
    pub fn increment(&mut self, set: &[u32]) {
        fn bump(node: &mut TrieNode, rest: &[u32], visits: &Cell<u64>) {
            node.count += 1;
            for (i, &e) in rest.iter().enumerate() {
                visits.set(visits.get() + 1);
                bump(node.children.entry(e).or_default(), &rest[i + 1..], visits);
            }
        }
        bump(&mut self.root, set, &self.visits);
    }

    /// The number of stored supersets of `core` (sorted ascending).
    pub fn query(&self, core: &[u32]) -> u64 {
        let mut node = &self.root;
        for &e in core {
            match node.children.get(&e) {
                Some(child) => {
                    self.visits.set(self.visits.get() + 1);
                    node = child;
                }
                None => return 0,
            }
        }
        node.count
    }

    /// Non-root nodes touched so far, over all increments and queries.
    pub fn node_visits(&self) -> u64 {
        self.visits.get()
    }
}

/// Reorders the family lexicographically by element sequence, shorter sets
/// first on equal prefixes. One stable counting sort per position keeps the
/// work proportional to `d * (n + m)`.
pub fn sort_family(inst: &Instance) -> Instance {
    let d = inst.d as usize;
    let n = inst.n as usize;
    let mut order: Vec<usize> = (0..inst.family.len()).collect();
    for pos in (0..d).rev() {
        // Key 0 stands for a missing position, sorting shorter sets first.
        let key = |i: usize| inst.family[i].get(pos).copied().unwrap_or(0) as usize;
        let mut starts = vec![0usize; n + 2];
        for &i in &order {
            starts[key(i) + 1] += 1;
        }
        for b in 1..starts.len() {
            starts[b] += starts[b - 1];
        }
        let mut next = vec![0usize; order.len()];
        for &i in &order {
            next[starts[key(i)]] = i;
            starts[key(i)] += 1;
        }
        order = next;
    }
    Instance {
        kind: inst.kind,
        d: inst.d,
        n: inst.n,
        k: inst.k,
        family: order.into_iter().map(|i| inst.family[i].clone()).collect(),
    }
}

/// One in-progress single-pass kernelization; step sets through it in stream
/// order and read the stored family at any prefix.
pub struct LinearKernelRun {
    d: usize,
    /// `thresholds[j] = base^j` (saturating), indexed by `d - |C|`.
    thresholds: Vec<u64>,
    trie: SupersetTrie,
    stored: Vec<Vec<u32>>,
    processed: usize,
}

impl LinearKernelRun {
    pub fn new(d: u32, base: u64) -> LinearKernelRun {
        LinearKernelRun {
            d: d as usize,
            thresholds: (0..=d).map(|j| base.saturating_pow(j)).collect(),
            trie: SupersetTrie::new(),
            stored: Vec::new(),
            processed: 0,
        }
    }

    /// Processes one set; true means it was stored. Subsets are checked
    /// smallest first, lexicographic within a size, stopping at the first
    /// full counter.
    pub fn step(&mut self, set: &[u32]) -> bool {
        self.processed += 1;
        let trie = &self.trie;
        let thresholds = &self.thresholds;
        let d = self.d;
        let mut keep = true;
        for_each_subset_by_size(set, |c| {
            if trie.query(c) >= thresholds[d - c.len()] {
                keep = false;
            }
            keep
        });
        if keep {
            self.stored.push(set.to_vec());
            self.trie.increment(set);
        }
        keep
    }

    pub fn processed(&self) -> usize {
        self.processed
    }

    pub fn stored(&self) -> &[Vec<u32>] {
        &self.stored
    }

    pub fn node_visits(&self) -> u64 {
        self.trie.node_visits()
    }

    /// Re-checks the stored-superset bound for every subset of every stored
    /// set at the current prefix.
    pub fn audit_invariant(&self) -> bool {
        let mut ok = true;
        for f in &self.stored {
            for_each_subset_by_size(f, |c| {
                ok = self.trie.query(c) <= self.thresholds[self.d - c.len()];
                ok
            });
            if !ok {
                break;
            }
        }
        ok
    }

    pub fn finish(self) -> Vec<Vec<u32>> {
        self.stored
    }
}

fn kernelize_linear(inst: &Instance, base: u64, sort: bool) -> Instance {
    let ordered;
    let input = if sort {
        ordered = sort_family(inst);
        &ordered
    } else {
        inst
    };
    let mut run = LinearKernelRun::new(inst.d, base);
    for set in &input.family {
        run.step(set);
    }
    let kept = Instance {
        kind: inst.kind,
        d: inst.d,
        n: inst.n,
        k: inst.k,
        family: run.finish(),
    };
    canonical_relabel(&kept)
}

/// Single-pass hitting-set kernel over the sorted family.
pub fn kernelize_hs_linear(inst: &Instance) -> Instance {
    kernelize_hs_linear_opts(inst, true)
}

/// [`kernelize_hs_linear`] with the sort prepass made optional, for
/// streaming-order experiments.
pub fn kernelize_hs_linear_opts(inst: &Instance, sort: bool) -> Instance {
    kernelize_linear(inst, inst.k as u64 + 1, sort)
}

/// Single-pass packing kernel over the sorted family; `k = 0` passes the
/// input through unchanged.
pub fn kernelize_sp_linear(inst: &Instance) -> Instance {
    kernelize_sp_linear_opts(inst, true)
}

/// [`kernelize_sp_linear`] with the sort prepass made optional.
pub fn kernelize_sp_linear_opts(inst: &Instance, sort: bool) -> Instance {
    if inst.k == 0 {
        return inst.clone();
    }
    kernelize_linear(inst, packing_threshold_base(inst.d, inst.k), sort)
}
