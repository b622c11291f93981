//! Streaming hitting-set kernel.
//!
//! Thresholds use base `k + 1`: a set is dropped once some subset `C` of it
//! already has `(k+1)^(d-|C|)` surviving supersets, because any hitting set of
//! size `k` either hits `C` or is forced to hit all the survivors anyway.
//! Layer 0 keeps at most `(k+1)^d` sets over at most `d(k+1)^d` elements; the
//! final step renames the ground set to first-occurrence order in the output
//! stream, which equals [`canonical_relabel`] of the kept family.

use crate::instance::{canonical_relabel, Instance};
use crate::layered::{audit_family_layer, family_would_output, run_family_layer};
use crate::stream::{RunReport, SpaceError};

fn base(inst: &Instance) -> u64 {
    inst.k as u64 + 1
}

/// Would the layer keep the set at step `t`?
pub fn would_output(inst: &Instance, layer: usize, t: usize) -> bool {
    family_would_output(inst, base(inst), layer, t)
}

/// The sets the given layer keeps, in stream order, original labels.
pub fn layer_family(inst: &Instance, layer: usize) -> Vec<Vec<u32>> {
    run_family_layer(inst, base(inst), layer, None).expect("unbudgeted run").0
}

/// [`layer_family`] with metering and an optional hard bit budget.
pub fn layer_family_metered(
    inst: &Instance,
    layer: usize,
    budget: Option<u64>,
) -> Result<(Vec<Vec<u32>>, RunReport), SpaceError> {
    run_family_layer(inst, base(inst), layer, budget)
}

/// Materializes the layer output and re-checks its superset bounds.
pub fn invariant_audit(inst: &Instance, layer: usize) -> bool {
    audit_family_layer(inst, base(inst), layer)
}

/// The full kernel: layer 0 output, ground set renamed to `1..n'`.
pub fn kernelize_hs_logspace(inst: &Instance) -> Instance {
    kernelize_hs_logspace_metered(inst, None).expect("unbudgeted run").0
}

/// [`kernelize_hs_logspace`] with metering and an optional hard bit budget.
pub fn kernelize_hs_logspace_metered(
    inst: &Instance,
    budget: Option<u64>,
) -> Result<(Instance, RunReport), SpaceError> {
    let (kept, report) = run_family_layer(inst, base(inst), 0, budget)?;
    let unrelabeled = Instance {
        kind: inst.kind,
        d: inst.d,
        n: inst.n,
        k: inst.k,
        family: kept,
    };
    Ok((canonical_relabel(&unrelabeled), report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{gen_set_instance, SetKind};
    use crate::oracles::min_hitting_set_size;
    use crate::sets::contains_sorted;

    fn hs(d: u32, n: u32, k: u32, family: Vec<Vec<u32>>) -> Instance {
        Instance { kind: SetKind::HittingSet, d, n, k, family }
    }

    fn star() -> Instance {
        hs(2, 4, 1, vec![vec![1, 2], vec![1, 3], vec![1, 4]])
    }

    #[test]
    fn star_layer_decisions() {
        let i = star();
        // Third step: {1} already has two surviving supersets, limit (k+1)^1.
        assert!(would_output(&i, 1, 1));
        assert!(!would_output(&i, 1, 2));
        assert!(would_output(&i, 0, 0));
        assert!(!would_output(&i, 0, 2));
        assert!(would_output(&i, 2, 2)); // no duplicates, top layer keeps all
    }

    #[test]
    fn star_kernel() {
        let got = kernelize_hs_logspace(&star());
        assert_eq!(got.family, vec![vec![1, 2], vec![1, 3]]);
        assert_eq!(got.n, 3);
        assert_eq!((got.d, got.k), (2, 1));
    }

    #[test]
    fn singleton_stream_keeps_first_k_plus_one() {
        let i = hs(1, 4, 2, vec![vec![1], vec![2], vec![3], vec![4]]);
        let got = kernelize_hs_logspace(&i);
        assert_eq!(got.family, vec![vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn duplicates_are_dropped_at_the_top_layer() {
        let i = hs(2, 4, 3, vec![vec![1, 2], vec![1, 2], vec![3, 4]]);
        assert!(would_output(&i, 2, 0));
        assert!(!would_output(&i, 2, 1));
        assert_eq!(layer_family(&i, 2), vec![vec![1, 2], vec![3, 4]]);
    }

    #[test]
    fn empty_family_stays_empty() {
        let i = hs(2, 5, 1, vec![]);
        let got = kernelize_hs_logspace(&i);
        assert!(got.family.is_empty());
        assert_eq!(got.n, 1);
    }

    #[test]
    fn kernel_equals_relabeled_layer_zero() {
        for seed in 0..30 {
            let i = gen_set_instance(SetKind::HittingSet, 2, 8, 14, 1, seed).unwrap();
            let kept = hs(i.d, i.n, i.k, layer_family(&i, 0));
            assert_eq!(kernelize_hs_logspace(&i), canonical_relabel(&kept));
        }
    }

    #[test]
    fn audits_hold_on_star_and_random_instances() {
        let i = star();
        for layer in 0..=2 {
            assert!(invariant_audit(&i, layer));
        }
        for seed in 0..20 {
            let i = gen_set_instance(SetKind::HittingSet, 3, 7, 18, 2, seed).unwrap();
            for layer in 0..=3 {
                assert!(invariant_audit(&i, layer), "seed {seed} layer {layer}");
            }
        }
    }

    /// Bottom-up reference: materializes each layer over the previous one.
    fn ref_layer_family(inst: &Instance, layer: usize) -> Vec<Vec<u32>> {
        let d = inst.d as usize;
        let b = inst.k as u64 + 1;
        let m = inst.family.len();
        let mut kept = vec![false; m];
        for t in 0..m {
            kept[t] = !inst.family[..t].contains(&inst.family[t]);
        }
        for l in (layer..d).rev() {
            let limit = b.saturating_pow((d - l) as u32);
            let prev = kept.clone();
            for t in 0..m {
                if !prev[t] {
                    kept[t] = false;
                    continue;
                }
                let f = &inst.family[t];
                let mut ok = true;
                let mut cur = crate::sets::SubsetCursor::new(f.len(), l);
                let mut c = Vec::new();
                while cur.next_into(f, &mut c) {
                    let count = (0..t)
                        .filter(|&t2| prev[t2] && contains_sorted(&inst.family[t2], &c))
                        .count() as u64;
                    if count >= limit {
                        ok = false;
                        break;
                    }
                }
                kept[t] = ok;
            }
        }
        (0..m).filter(|&t| kept[t]).map(|t| inst.family[t].clone()).collect()
    }

    #[test]
    fn nested_simulation_matches_materialized_reference() {
        for seed in 0..40 {
            let d = 2 + (seed % 2) as u32;
            let i = gen_set_instance(SetKind::HittingSet, d, 7, 16, (seed % 3) as u32, seed)
                .unwrap();
            for layer in 0..=d as usize {
                assert_eq!(
                    layer_family(&i, layer),
                    ref_layer_family(&i, layer),
                    "seed {seed} layer {layer}"
                );
            }
        }
    }

    #[test]
    fn kernel_preserves_small_hitting_sets() {
        for seed in 0..40 {
            let i = gen_set_instance(SetKind::HittingSet, 2, 7, 12, 1, seed).unwrap();
            let kept = layer_family(&i, 0);
            let k = i.k as usize;
            assert_eq!(
                min_hitting_set_size(&i.family, k) <= k,
                min_hitting_set_size(&kept, k) <= k,
                "seed {seed}"
            );
        }
    }

    #[test]
    fn size_bounds_hold() {
        for seed in 0..40 {
            let i = gen_set_instance(SetKind::HittingSet, 3, 9, 28, 1, seed).unwrap();
            let out = kernelize_hs_logspace(&i);
            let cap = (i.k as u64 + 1).pow(i.d);
            assert!(out.family.len() as u64 <= cap);
            assert!(out.n as u64 <= i.d as u64 * cap);
        }
    }
}
