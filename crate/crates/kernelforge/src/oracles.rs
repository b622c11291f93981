//! Exact reference solvers and sunflower/flower search.
//!
//! These are deliberately simple branch-and-bound and enumeration routines:
//! they are the ground truth the kernels are tested against, so they share no
//! code with the kernel implementations. All solvers truncate their answer at
//! a caller-supplied cap, which keeps them usable on anything small enough to
//! verify.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use thiserror::Error;

use crate::instance::GraphInstance;
use crate::sets::{contains_sorted, for_each_subset_by_size, intersects_sorted};

/// Members of `family` containing `core`, with `core` removed, input order
/// preserved.
pub fn restriction(family: &[Vec<u32>], core: &[u32]) -> Vec<Vec<u32>> {
    family
        .iter()
        .filter(|f| contains_sorted(f, core))
        .map(|f| f.iter().copied().filter(|e| !core.contains(e)).collect())
        .collect()
}

/// Minimum hitting set size, truncated at `cap + 1`. A result of `cap + 1`
/// means every hitting set needs more than `cap` elements (in particular, a
/// family containing the empty set cannot be hit at all).
pub fn min_hitting_set_size(family: &[Vec<u32>], cap: usize) -> usize {
    fn go(family: &[&[u32]], cap_left: usize) -> usize {
        let first = match family.first() {
            None => return 0,
            Some(f) => *f,
        };
        if first.is_empty() {
            return cap_left + 1;
        }
        if cap_left == 0 {
            return 1;
        }
        // Branch on the elements of the first unhit set.
        let mut best = cap_left + 1;
        for &x in first {
            let rest: Vec<&[u32]> = family.iter().filter(|f| !f.contains(&x)).copied().collect();
            best = best.min(1 + go(&rest, cap_left - 1));
        }
        best
    }
    let view: Vec<&[u32]> = family.iter().map(|f| f.as_slice()).collect();
    go(&view, cap)
}

/// Maximum number of pairwise disjoint members, truncated at `cap`.
pub fn max_packing_size(family: &[Vec<u32>], cap: usize) -> usize {
    fn go(family: &[&[u32]], cap_left: usize) -> usize {
        if cap_left == 0 {
            return 0;
        }
        let first = match family.first() {
            None => return 0,
            Some(f) => *f,
        };
        let skip = go(&family[1..], cap_left);
        let rest: Vec<&[u32]> = family[1..]
            .iter()
            .filter(|f| !intersects_sorted(f, first))
            .copied()
            .collect();
        let take = 1 + go(&rest, cap_left - 1);
        skip.max(take)
    }
    let view: Vec<&[u32]> = family.iter().map(|f| f.as_slice()).collect();
    go(&view, cap)
}

/// Minimum edge dominating set size, truncated at `cap + 1`. An edge set `S`
/// dominates `e` when `e` shares an endpoint with some member of `S`.
pub fn min_eds_size(g: &GraphInstance, cap: usize) -> usize {
    let m = g.edges.len();
    for size in 0..=cap.min(m) {
        for combo in (0..m).combinations(size) {
            let mut touched = BTreeSet::new();
            for &i in &combo {
                touched.insert(g.edges[i].0);
                touched.insert(g.edges[i].1);
            }
            if g.edges.iter().all(|(u, v)| touched.contains(u) || touched.contains(v)) {
                return size;
            }
        }
    }
    cap + 1
}

/// True when every blocking set of the restriction onto `core` needs at least
/// `l` elements. By convention this is false when `core` itself is a member
/// (the restriction then contains the empty set and nothing can block it);
/// that case is handled separately by the kernels.
pub fn is_flower(family: &[Vec<u32>], core: &[u32], l: u64) -> bool {
    let rest = restriction(family, core);
    if rest.iter().any(|f| f.is_empty()) {
        return false;
    }
    if l == 0 {
        return true;
    }
    min_hitting_set_size(&rest, (l - 1) as usize) as u64 >= l
}

/// The two counting conditions that force `core`: at least `l^(d-|core|)`
/// members contain `core`, and no strict superset of `core` is contained in
/// more than `l^(d-|C'|)` members. When both hold, `core` is a member itself
/// or the supersets of `core` form an `l`-flower with that core.
///
/// Requires `|core| < d`.
pub fn check_counting_conditions(family: &[Vec<u32>], core: &[u32], l: u64, d: usize) -> bool {
    assert!(core.len() < d, "core must be strictly smaller than the arity bound");
    let count = family.iter().filter(|f| contains_sorted(f, core)).count() as u64;
    if count < l.saturating_pow((d - core.len()) as u32) {
        return false;
    }
    // Only strict supersets that occur inside some member can violate the cap.
    let mut supersets: BTreeSet<Vec<u32>> = BTreeSet::new();
    for f in family.iter().filter(|f| contains_sorted(f, core)) {
        for_each_subset_by_size(f, |s| {
            if s.len() > core.len() && contains_sorted(s, core) {
                supersets.insert(s.to_vec());
            }
            true
        });
    }
    for c2 in &supersets {
        let cnt = family.iter().filter(|f| contains_sorted(f, c2)).count() as u64;
        if cnt > l.saturating_pow((d - c2.len()) as u32) {
            return false;
        }
    }
    true
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FlowerError {
    #[error("family of {size} sets is too small: need more than {bound}")]
    FamilyTooSmall { size: usize, bound: u64 },
    #[error("family is not {d}-uniform: set {index} has size {size}")]
    NotUniform { index: usize, size: usize, d: usize },
    #[error("duplicate sets in family (indices {a} and {b})")]
    DuplicateSets { a: usize, b: usize },
    #[error("set {index} exceeds the arity bound d={d}")]
    Oversized { index: usize, d: usize },
    #[error("set {index} is empty")]
    EmptySet { index: usize },
    #[error("constructed core failed verification")]
    VerificationFailed,
}

/// A flower located by [`find_flower`]: the members containing `core` need at
/// least `l` elements to block once `core` is removed. `blocking_number` is
/// the oracle-computed minimum blocking set size of that restriction,
/// truncated at `l + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowerWitness {
    pub core: Vec<u32>,
    pub member_indices: Vec<usize>,
    pub blocking_number: usize,
}

fn reject_duplicates(family: &[Vec<u32>]) -> Result<(), FlowerError> {
    let mut seen: BTreeMap<&[u32], usize> = BTreeMap::new();
    for (i, f) in family.iter().enumerate() {
        if let Some(&a) = seen.get(f.as_slice()) {
            return Err(FlowerError::DuplicateSets { a, b: i });
        }
        seen.insert(f, i);
    }
    Ok(())
}

/// Finds an `l`-flower core in a family of more than `(l-1)^d` distinct sets
/// of size at most `d`: repeatedly descend into the element whose restriction
/// stays above the size bound one arity lower (smallest qualifying id first),
/// and stop when no element qualifies. The returned core is verified with
/// [`is_flower`] before being handed back.
pub fn find_flower(family: &[Vec<u32>], l: u64, d: usize) -> Result<FlowerWitness, FlowerError> {
    for (i, f) in family.iter().enumerate() {
        if f.is_empty() {
            return Err(FlowerError::EmptySet { index: i });
        }
        if f.len() > d {
            return Err(FlowerError::Oversized { index: i, d });
        }
    }
    reject_duplicates(family)?;
    let bound = l.saturating_sub(1).saturating_pow(d as u32);
    if family.len() as u64 <= bound {
        return Err(FlowerError::FamilyTooSmall { size: family.len(), bound });
    }

    let mut core: Vec<u32> = Vec::new();
    if l >= 2 {
        let mut current: Vec<Vec<u32>> = family.to_vec();
        let mut arity = d;
        while arity > 0 {
            let need = (l - 1).saturating_pow((arity - 1) as u32);
            let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
            for f in &current {
                for &x in f {
                    *counts.entry(x).or_insert(0) += 1;
                }
            }
            let pick = counts.iter().find(|(_, &c)| c > need).map(|(&x, _)| x);
            match pick {
                None => break,
                Some(x) => {
                    core.push(x);
                    current = restriction(&current, &[x]);
                    arity -= 1;
                }
            }
        }
    }
    core.sort_unstable();

    if !is_flower(family, &core, l) {
        return Err(FlowerError::VerificationFailed);
    }
    let member_indices = family
        .iter()
        .enumerate()
        .filter(|(_, f)| contains_sorted(f, &core))
        .map(|(i, _)| i)
        .collect();
    let blocking_number = min_hitting_set_size(&restriction(family, &core), l as usize);
    Ok(FlowerWitness { core, member_indices, blocking_number })
}

/// A sunflower located by [`find_sunflower`]: the petals intersect pairwise in
/// exactly `core`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SunflowerWitness {
    pub core: Vec<u32>,
    pub petal_indices: Vec<usize>,
}

/// Finds a sunflower with at least `l` petals in a `d`-uniform family of
/// distinct sets. Greedily extracts a maximal pairwise-disjoint subfamily; if
/// it has `l` members they are the petals (core empty), otherwise some element
/// lies in more than `|family| / (d(l-1))` sets and the search recurses on its
/// restriction, re-attaching the element to the core. More than `d!(l-1)^d`
/// sets guarantee success; smaller families may still succeed, and an error is
/// returned only when the search runs out of qualifying elements.
pub fn find_sunflower(
    family: &[Vec<u32>],
    l: u64,
    d: usize,
) -> Result<SunflowerWitness, FlowerError> {
    if d == 0 {
        return Err(FlowerError::NotUniform { index: 0, size: 0, d });
    }
    for (i, f) in family.iter().enumerate() {
        if f.len() != d {
            return Err(FlowerError::NotUniform { index: i, size: f.len(), d });
        }
    }
    reject_duplicates(family)?;

    fn go(
        sets: &[Vec<u32>],
        indices: &[usize],
        arity: usize,
        l: u64,
    ) -> Option<(Vec<u32>, Vec<usize>)> {
        let mut chosen: Vec<usize> = Vec::new();
        for (i, f) in sets.iter().enumerate() {
            if chosen.iter().all(|&j| !intersects_sorted(&sets[j], f)) {
                chosen.push(i);
            }
        }
        if chosen.len() as u64 >= l {
            return Some((Vec::new(), chosen.iter().map(|&i| indices[i]).collect()));
        }
        if sets.is_empty() || l <= 1 || arity == 0 {
            return None;
        }
        let m = sets.len() as u64;
        let denom = arity as u64 * (l - 1);
        let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
        for f in sets {
            for &x in f {
                *counts.entry(x).or_insert(0) += 1;
            }
        }
        for (&x, &c) in &counts {
            if c * denom <= m {
                continue;
            }
            let mut sub_sets = Vec::new();
            let mut sub_idx = Vec::new();
            for (i, f) in sets.iter().enumerate() {
                if f.contains(&x) {
                    sub_sets.push(f.iter().copied().filter(|&e| e != x).collect());
                    sub_idx.push(indices[i]);
                }
            }
            if let Some((mut core, petals)) = go(&sub_sets, &sub_idx, arity - 1, l) {
                core.push(x);
                core.sort_unstable();
                return Some((core, petals));
            }
        }
        None
    }

    let indices: Vec<usize> = (0..family.len()).collect();
    match go(family, &indices, d, l) {
        Some((core, petal_indices)) => Ok(SunflowerWitness { core, petal_indices }),
        None => {
            let bound = {
                let fact: u64 = (1..=d as u64).product();
                fact.saturating_mul(l.saturating_sub(1).saturating_pow(d as u32))
            };
            Err(FlowerError::FamilyTooSmall { size: family.len(), bound })
        }
    }
}
