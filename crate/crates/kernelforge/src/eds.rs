//! Streaming edge-dominating-set kernel.
//!
//! The graph is viewed as a family of 2-element sets and run through the
//! hitting-set engine with threshold base `2k + 1` — a vertex-cover pass at
//! parameter `2k`, since any `k` dominating edges touch at most `2k`
//! vertices. Three checks follow, each by fresh nested simulation:
//!
//! (a) if the vertex-cover pass would survive more than `(2k+1)^2` edges, the
//!     empty-subset threshold of its bottom layer fires and the instance is
//!     declared infeasible;
//! (b) if more than `2k` vertices keep `2k + 1` surviving incident edges,
//!     infeasible as well;
//! (c) otherwise every input edge whose endpoints both keep at least one
//!     surviving incident edge goes to the output, vertices renamed by first
//!     occurrence, `k` unchanged.

use crate::instance::{canonical_relabel_graph, GraphInstance};
use crate::layered::Engine;
use crate::stream::{InputTape, OutputSink, RunReport, SpaceError, SpaceMeter, Tape};

fn vc_family(g: &GraphInstance) -> Vec<Vec<u32>> {
    g.edges.iter().map(|&(u, v)| vec![u, v]).collect()
}

fn vc_base(k: u32) -> u64 {
    2 * k as u64 + 1
}

/// How many edges incident to `v` the vertex-cover pass keeps, truncated at
/// `cap`. Each candidate edge is decided by a fresh simulation.
pub fn vc_output_degree(g: &GraphInstance, v: u32, cap: u64) -> u64 {
    let family = vc_family(g);
    let tape = InputTape::new(&family);
    let engine = Engine::new(&tape, 2, vc_base(g.k), g.n as u64);
    let mut meter = SpaceMeter::new(None);
    let mut count = 0;
    for (t, &(a, b)) in g.edges.iter().enumerate() {
        if count >= cap {
            break;
        }
        if (a == v || b == v) && engine.would_output(0, t, &mut meter) {
            count += 1;
        }
    }
    count
}

/// Explicit kernel size cap: possible edges among the `2k` high-degree
/// vertices, plus surviving low-degree edges, plus edges between the two
/// groups.
pub fn eds_edge_bound(k: u32) -> u64 {
    let h = 2 * k as u64;
    let sq = (h + 1) * (h + 1);
    h * h.saturating_sub(1) / 2 + sq + h * 2 * sq
}

/// The full kernel. Infeasible inputs map to the canonical unsolvable graph.
pub fn kernelize_eds(g: &GraphInstance) -> GraphInstance {
    kernelize_eds_metered(g, None).expect("unbudgeted run").0
}

/// [`kernelize_eds`] with metering and an optional hard bit budget.
pub fn kernelize_eds_metered(
    g: &GraphInstance,
    budget: Option<u64>,
) -> Result<(GraphInstance, RunReport), SpaceError> {
    let family = vc_family(g);
    let tape = InputTape::new(&family);
    let base = vc_base(g.k);
    let engine = Engine::new(&tape, 2, base, g.n as u64);
    let mut meter = SpaceMeter::new(budget);
    let mut sink = OutputSink::new();

    let report = |meter: &SpaceMeter, tape: &InputTape, sink: &OutputSink| RunReport {
        peak_bits: meter.peak_bits(),
        tape_reads: tape.reads(),
        sets_emitted: sink.emitted(),
    };

    // (a) One more surviving edge than the empty-subset limit means the
    // bottom layer would drop it for the empty subset — infeasible.
    let limit = base.saturating_pow(2);
    let mut survivors: u64 = 0;
    meter.set("surv", 0);
    for t in 0..g.edges.len() {
        meter.set("pos", t as u64);
        if engine.would_output(1, t, &mut meter) {
            survivors += 1;
            meter.set("surv", survivors);
            if survivors > limit {
                return Ok((GraphInstance::no_instance(), report(&meter, &tape, &sink)));
            }
        }
        meter.check_budget()?;
    }

    // (b) More than 2k vertices of surviving degree 2k+1 cannot all be
    // touched by k dominating edges.
    let mut high: u64 = 0;
    meter.set("high", 0);
    for v in 1..=g.n {
        meter.set("v", v as u64);
        let mut deg: u64 = 0;
        meter.set("deg", 0);
        for (t, &(a, b)) in g.edges.iter().enumerate() {
            if deg >= base {
                break;
            }
            meter.set("pos", t as u64);
            if (a == v || b == v) && engine.would_output(0, t, &mut meter) {
                deg += 1;
                meter.set("deg", deg);
            }
        }
        if deg >= base {
            high += 1;
            meter.set("high", high);
            if high > 2 * g.k as u64 {
                return Ok((GraphInstance::no_instance(), report(&meter, &tape, &sink)));
            }
        }
        meter.check_budget()?;
    }

    // (c) Keep input edges whose endpoints both retain a surviving edge.
    for (t, &(u, v)) in g.edges.iter().enumerate() {
        meter.set("pos", t as u64);
        let mut covered = true;
        for w in [u, v] {
            meter.set("v", w as u64);
            let mut deg: u64 = 0;
            meter.set("deg", 0);
            for (t2, &(a, b)) in g.edges.iter().enumerate() {
                if deg >= 1 {
                    break;
                }
                meter.set("pos2", t2 as u64);
                if (a == w || b == w) && engine.would_output(0, t2, &mut meter) {
                    deg += 1;
                    meter.set("deg", deg);
                }
            }
            if deg == 0 {
                covered = false;
                break;
            }
        }
        if covered {
            sink.emit(&[u, v]);
        }
        meter.check_budget()?;
    }

    let run = report(&meter, &tape, &sink);
    let edges: Vec<(u32, u32)> = sink.into_family().into_iter().map(|e| (e[0], e[1])).collect();
    let kept = GraphInstance { n: g.n, k: g.k, edges };
    Ok((canonical_relabel_graph(&kept), run))
}
