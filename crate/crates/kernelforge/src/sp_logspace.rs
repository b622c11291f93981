//! Streaming set-packing kernel.
//!
//! Same layered engine as the hitting-set side, but the threshold base is
//! `d(k-1) + 1`: if a subset `C` of the current set already has that many
//! surviving supersets, any packing of `k - 1` other sets (touching at most
//! `d(k-1)` elements) misses one of them, so the current set is redundant.
//! For `k = 0` the answer is trivially yes and the input passes through.

use crate::instance::{canonical_relabel, Instance};
use crate::layered::{audit_family_layer, run_family_layer};
use crate::stream::{RunReport, SpaceError};

/// Threshold base `d(k-1) + 1`; callers guard `k = 0` themselves.
pub fn packing_threshold_base(d: u32, k: u32) -> u64 {
    d as u64 * (k as u64).saturating_sub(1) + 1
}

/// The sets the given layer keeps, in stream order, original labels.
pub fn layer_family_sp(inst: &Instance, layer: usize) -> Vec<Vec<u32>> {
    run_family_layer(inst, packing_threshold_base(inst.d, inst.k), layer, None)
        .expect("unbudgeted run")
        .0
}

/// Materializes the layer output and re-checks its superset bounds.
pub fn invariant_audit_sp(inst: &Instance, layer: usize) -> bool {
    audit_family_layer(inst, packing_threshold_base(inst.d, inst.k), layer)
}

/// The full kernel: layer 0 output, ground set renamed to `1..n'`.
pub fn kernelize_sp_logspace(inst: &Instance) -> Instance {
    kernelize_sp_logspace_metered(inst, None).expect("unbudgeted run").0
}

/// [`kernelize_sp_logspace`] with metering and an optional hard bit budget.
pub fn kernelize_sp_logspace_metered(
    inst: &Instance,
    budget: Option<u64>,
) -> Result<(Instance, RunReport), SpaceError> {
    if inst.k == 0 {
        let report = RunReport {
            peak_bits: 0,
            tape_reads: 0,
            sets_emitted: inst.family.len(),
        };
        return Ok((inst.clone(), report));
    }
    let (kept, report) =
        run_family_layer(inst, packing_threshold_base(inst.d, inst.k), 0, budget)?;
    let unrelabeled = Instance {
        kind: inst.kind,
        d: inst.d,
        n: inst.n,
        k: inst.k,
        family: kept,
    };
    Ok((canonical_relabel(&unrelabeled), report))
}
