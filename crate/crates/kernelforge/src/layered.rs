//! Layered streaming kernel engine.
//!
//! The kernel is a stack of layers over one input tape. The top layer drops
//! exact duplicates: it keeps the set at step `t` iff no earlier step holds
//! the same set. Each layer `l` below keeps a set `F` only when the layer
//! above keeps it and, for every subset `C` of `F` with `|C| = l`, fewer than
//! `base^(d-l)` supersets of `C` survive the layer above among the earlier
//! steps. Layer 0 is the kernel output.
//!
//! Counts are obtained by fresh nested simulation of the layer above over the
//! prefix — never from stored state — so a step decision at layer `l` holds
//! at most `d - l + 1` frames of registers at a time. Counting loops stop as
//! soon as the threshold is reached, which changes no decision.

use crate::instance::Instance;
use crate::sets::{contains_sorted, for_each_subset_by_size, SubsetCursor};
use crate::stream::{InputTape, OutputSink, RunReport, SpaceError, SpaceMeter, Tape};

pub(crate) struct Engine<'a, T: Tape> {
    tape: &'a T,
    d: usize,
    /// `thresholds[j] = base^j` (saturating), indexed by `d - |C|`.
    thresholds: Vec<u64>,
    max_id: u64,
}

impl<'a, T: Tape> Engine<'a, T> {
    pub fn new(tape: &'a T, d: usize, base: u64, max_id: u64) -> Self {
        let thresholds = (0..=d as u32).map(|j| base.saturating_pow(j)).collect();
        Engine { tape, d, thresholds, max_id }
    }

    /// Would the given layer keep the set at step `t`?
    pub fn would_output(&self, layer: usize, t: usize, meter: &mut SpaceMeter) -> bool {
        debug_assert!(layer <= self.d);
        meter.enter_frame();
        let keep = self.step_kept(layer, t, meter);
        meter.exit_frame();
        keep
    }

    fn step_kept(&self, layer: usize, t: usize, meter: &mut SpaceMeter) -> bool {
        meter.set("t", t as u64);
        let mut f = Vec::with_capacity(self.d);
        if !self.tape.read_into(t, &mut f) {
            return false;
        }
        meter.set_cursor("F", self.d as u64, self.max_id);

        if layer == self.d {
            if self.tape.inherent_dedup() {
                return true;
            }
            let mut g = Vec::with_capacity(self.d);
            for t2 in 0..t {
                meter.set("t2", t2 as u64);
                if self.tape.read_into(t2, &mut g) && g == f {
                    return false;
                }
            }
            return true;
        }

        if !self.would_output(layer + 1, t, meter) {
            return false;
        }

        let limit = self.thresholds[self.d - layer];
        let mut core = Vec::with_capacity(layer);
        let mut g = Vec::with_capacity(self.d);
        let mut cursor = SubsetCursor::new(f.len(), layer);
        while cursor.next_into(&f, &mut core) {
            meter.set_cursor("C", self.d as u64, self.max_id);
            let mut count: u64 = 0;
            meter.set("count", 0);
            for t2 in 0..t {
                if count >= limit {
                    break;
                }
                meter.set("t2", t2 as u64);
                if self.tape.read_into(t2, &mut g)
                    && contains_sorted(&g, &core)
                    && self.would_output(layer + 1, t2, meter)
                {
                    count += 1;
                    meter.set("count", count);
                }
            }
            if count >= limit {
                return false;
            }
        }
        true
    }

    /// Streams every set the given layer keeps into the sink, in step order.
    pub fn run_layer(
        &self,
        layer: usize,
        meter: &mut SpaceMeter,
        sink: &mut OutputSink,
    ) -> Result<(), SpaceError> {
        meter.enter_frame();
        let mut buf = Vec::with_capacity(self.d);
        for t in 0..self.tape.raw_len() {
            meter.set("pos", t as u64);
            if self.would_output(layer, t, meter) {
                self.tape.read_into(t, &mut buf);
                sink.emit(&buf);
                meter.set("out", sink.emitted() as u64);
            }
            meter.check_budget()?;
        }
        meter.exit_frame();
        Ok(())
    }
}

/// Runs the family kernel at the given layer and threshold base, returning
/// the kept sets (original labels, stream order) and the run report.
pub(crate) fn run_family_layer(
    inst: &Instance,
    base: u64,
    layer: usize,
    budget: Option<u64>,
) -> Result<(Vec<Vec<u32>>, RunReport), SpaceError> {
    let tape = InputTape::new(&inst.family);
    let engine = Engine::new(&tape, inst.d as usize, base, inst.n as u64);
    let mut meter = SpaceMeter::new(budget);
    let mut sink = OutputSink::new();
    engine.run_layer(layer, &mut meter, &mut sink)?;
    let report = RunReport {
        peak_bits: meter.peak_bits(),
        tape_reads: tape.reads(),
        sets_emitted: sink.emitted(),
    };
    Ok((sink.into_family(), report))
}

/// Would the family kernel with the given base keep step `t` at `layer`?
pub(crate) fn family_would_output(inst: &Instance, base: u64, layer: usize, t: usize) -> bool {
    let tape = InputTape::new(&inst.family);
    let engine = Engine::new(&tape, inst.d as usize, base, inst.n as u64);
    let mut meter = SpaceMeter::new(None);
    engine.would_output(layer, t, &mut meter)
}

/// Materializes the layer output and checks the surviving-superset bound for
/// every core of size `layer..=d` occurring inside a kept set.
pub(crate) fn audit_family_layer(inst: &Instance, base: u64, layer: usize) -> bool {
    let (fam, _) = run_family_layer(inst, base, layer, None).expect("unbudgeted run");
    let d = inst.d as usize;
    let mut cores = std::collections::BTreeSet::new();
    for f in &fam {
        for_each_subset_by_size(f, |c| {
            if c.len() >= layer {
                cores.insert(c.to_vec());
            }
            true
        });
    }
    cores.into_iter().all(|c| {
        let count = fam.iter().filter(|f| contains_sorted(f, &c)).count() as u64;
        count <= base.saturating_pow((d - c.len()) as u32)
    })
}
