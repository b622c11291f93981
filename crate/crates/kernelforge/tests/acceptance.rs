//! End-to-end acceptance checks for the whole toolkit.
//!
//! Each test sweeps seeded random inputs, compares kernels against
//! brute-force search, and prints a single `[PASS]`/`[FAIL]` line (visible
//! with `cargo test -- --nocapture`).

use std::time::Instant;

use kernelforge::eds::{eds_edge_bound, kernelize_eds};
use kernelforge::graphs::{kernelize_hfree_vd, kernelize_hpack};
use kernelforge::hs_logspace::{kernelize_hs_logspace, kernelize_hs_logspace_metered};
use kernelforge::instance::{
    gen_graph_instance, gen_set_instance, GraphInstance, Pattern, PatternSet, SetKind,
};
use kernelforge::linear::{sort_family, LinearKernelRun};
use kernelforge::oracles::{
    check_counting_conditions, find_flower, find_sunflower, is_flower, max_packing_size,
    min_eds_size,
};
use kernelforge::sp_logspace::{kernelize_sp_logspace, packing_threshold_base};
use kernelforge::stream::{InputTape, Tape, SPACE_CONSTANT};

fn finish(name: &str, detail: String, failures: Vec<String>) {
    if failures.is_empty() {
        println!("[PASS] {name}: {detail}");
    } else {
        println!("[FAIL] {name}: {} problem(s), first: {}", failures.len(), failures[0]);
        panic!("{name}: {}", failures.join("; "));
    }
}

/// True when some vertex subset encoded in `mask` (bit i = element i+1)
/// meets every set of the family.
fn mask_hits_all(family: &[Vec<u32>], mask: u32) -> bool {
    family.iter().all(|f| f.iter().any(|&e| mask >> (e - 1) & 1 == 1))
}

/// Exhaustive answer: does a hitting set of size at most `k` exist on
/// universe `1..=n`?  Requires `n <= 20`.
fn has_hitting_set(family: &[Vec<u32>], n: u32, k: u32) -> bool {
    (0u32..1 << n)
        .filter(|m| m.count_ones() <= k)
        .any(|m| mask_hits_all(family, m))
}

fn triangles_of(g: &GraphInstance) -> Vec<Vec<u32>> {
    let has = |a: u32, b: u32| g.edges.contains(&(a.min(b), a.max(b)));
    let mut out = Vec::new();
    for u in 1..=g.n {
        for v in u + 1..=g.n {
            for w in v + 1..=g.n {
                if has(u, v) && has(u, w) && has(v, w) {
                    out.push(vec![u, v, w]);
                }
            }
        }
    }
    out
}

/// Exhaustive answer: can deleting at most `k` vertices make `g`
/// triangle-free?
fn triangle_deletion_solves(g: &GraphInstance, k: u32) -> bool {
    let tris = triangles_of(g);
    (0u32..1 << g.n).filter(|m| m.count_ones() <= k).any(|mask| {
        tris.iter().all(|t| t.iter().any(|&v| mask >> (v - 1) & 1 == 1))
    })
}

#[test]
fn t01_hitting_set_streaming_kernel_preserves_answers() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let total = 500;
    for seed in 0..total {
        let d = 2 + (seed % 2) as u32;
        let n = 4 + (seed % 7) as u32;
        let m = 5 + (seed * 7 % 26) as u32;
        let k = (seed % 4) as u32;
        let inst = gen_set_instance(SetKind::HittingSet, d, n, m, k, seed).unwrap();
        let kernel = kernelize_hs_logspace(&inst);
        let before = has_hitting_set(&inst.family, inst.n, k);
        let after = has_hitting_set(&kernel.family, kernel.n, k);
        if before != after {
            failures.push(format!("seed {seed}: input answer {before}, kernel answer {after}"));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 300.0 {
        failures.push(format!("sweep took {secs:.0}s, budget is 300s"));
    }
    finish(
        "streaming hitting-set equivalence",
        format!("{total} seeded instances, exhaustive search agreed ({secs:.1}s)"),
        failures,
    );
}

#[test]
fn t02_hitting_set_kernel_respects_size_bounds() {
    let mut failures = Vec::new();
    let total = 500;
    for seed in 0..total {
        let d = 2 + (seed % 2) as u32;
        let n = 4 + (seed % 7) as u32;
        let m = 5 + (seed * 7 % 26) as u32;
        let k = (seed % 4) as u32;
        let inst = gen_set_instance(SetKind::HittingSet, d, n, m, k, seed).unwrap();
        let kernel = kernelize_hs_logspace(&inst);
        let set_bound = (k as u64 + 1).pow(d);
        let elem_bound = d as u64 * set_bound;
        if kernel.m() as u64 > set_bound {
            failures.push(format!("seed {seed}: {} sets, bound {set_bound}", kernel.m()));
        }
        // After relabeling, n is exactly the number of distinct elements
        // (or 1 for an empty family).
        if kernel.n as u64 > elem_bound.max(1) {
            failures.push(format!("seed {seed}: {} elements, bound {elem_bound}", kernel.n));
        }
    }
    finish(
        "hitting-set kernel size",
        format!("{total} kernels within (k+1)^d sets and d(k+1)^d elements"),
        failures,
    );
}

#[test]
fn t03_packing_kernels_agree_in_both_modes() {
    let mut failures = Vec::new();
    let total = 500;
    for seed in 0..total {
        let d = 2 + (seed % 2) as u32;
        let n = 4 + (seed % 7) as u32;
        let m = 5 + (seed * 11 % 26) as u32;
        let k = 1 + (seed % 3) as u32;
        let inst = gen_set_instance(SetKind::SetPacking, d, n, m, k, seed).unwrap();
        let streamed = kernelize_sp_logspace(&inst);
        let linear = kernelforge::linear::kernelize_sp_linear(&inst);
        let want = max_packing_size(&inst.family, k as usize) >= k as usize;
        for (mode, kernel) in [("logspace", &streamed), ("linear", &linear)] {
            let got = max_packing_size(&kernel.family, k as usize) >= k as usize;
            if got != want {
                failures.push(format!("seed {seed} {mode}: answer {got}, input {want}"));
            }
            let bound = packing_threshold_base(d, k).pow(d);
            if kernel.m() as u64 > bound {
                failures.push(format!("seed {seed} {mode}: {} sets, bound {bound}", kernel.m()));
            }
        }
    }
    finish(
        "packing kernels",
        format!("{total} instances, both modes answer-equivalent and within (d(k-1)+1)^d sets"),
        failures,
    );
}

#[test]
fn t04_linear_mode_invariant_and_prefix_equivalence() {
    let mut failures = Vec::new();
    let total = 100;
    for seed in 0..total {
        let packing = seed % 2 == 1;
        let kind = if packing { SetKind::SetPacking } else { SetKind::HittingSet };
        let d = 2 + (seed % 2) as u32;
        let n = 4 + (seed % 7) as u32;
        let m = 4 + (seed * 5 % 17) as u32;
        let k = 1 + (seed % 3) as u32;
        let inst = gen_set_instance(kind, d, n, m, k, seed + 900).unwrap();
        let base = if packing { packing_threshold_base(d, k) } else { k as u64 + 1 };
        let ordered = sort_family(&inst);
        let mut run = LinearKernelRun::new(d, base);
        for (t, set) in ordered.family.iter().enumerate() {
            run.step(set);
            if !run.audit_invariant() {
                failures.push(format!("seed {seed}: stored-family bound broken at step {t}"));
                break;
            }
            let prefix = &ordered.family[..=t];
            let ok = if packing {
                max_packing_size(prefix, k as usize) == max_packing_size(run.stored(), k as usize)
            } else {
                (0u32..1 << n).filter(|s| s.count_ones() <= k).all(|s| {
                    mask_hits_all(prefix, s) == mask_hits_all(run.stored(), s)
                })
            };
            if !ok {
                failures.push(format!("seed {seed}: prefix {t} not equivalent to stored family"));
                break;
            }
        }
    }
    finish(
        "linear mode audit",
        format!("{total} instances, per-step bound audit and prefix equivalence held"),
        failures,
    );
}

#[test]
fn t05_counting_conditions_force_core_or_flower() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(47);
    let mut failures = Vec::new();
    let total = 10_000;
    let mut premise_true = 0u32;
    for trial in 0..total {
        let d = 2 + (trial % 2);
        let l = 1 + (trial % 4) as u64;
        let n = 8u32;
        let (family, core): (Vec<Vec<u32>>, Vec<u32>) = if trial % 2 == 0 {
            // Random family and core; the premise holds only occasionally.
            let m = 3 + rng.gen_range(0..10);
            let fam = gen_set_instance(SetKind::HittingSet, d as u32, n, m, 0, rng.gen())
                .unwrap()
                .family;
            let c_len = rng.gen_range(0..d);
            let mut c: Vec<u32> =
                rand::seq::index::sample(&mut rng, n as usize, c_len).iter().map(|i| i as u32 + 1).collect();
            c.sort_unstable();
            (fam, c)
        } else {
            // Core plus petals that reuse elements sparingly, sometimes with
            // noise sets; the premise holds for most of these.
            let c_len = d - 1;
            let core: Vec<u32> = (1..=c_len as u32).collect();
            let petals = l.pow((d - c_len) as u32) as usize;
            let mut fam: Vec<Vec<u32>> = (0..petals)
                .map(|i| {
                    let mut f = core.clone();
                    f.push(c_len as u32 + 1 + i as u32);
                    f
                })
                .collect();
            for _ in 0..rng.gen_range(0..3) {
                let s = rng.gen_range(1..=d);
                let mut extra: Vec<u32> =
                    rand::seq::index::sample(&mut rng, n as usize, s).iter().map(|i| i as u32 + 1).collect();
                extra.sort_unstable();
                fam.push(extra);
            }
            (fam, core)
        };
        if check_counting_conditions(&family, &core, l, d) {
            premise_true += 1;
            let member = family.iter().any(|f| *f == core);
            if !member && !is_flower(&family, &core, l) {
                failures.push(format!(
                    "trial {trial}: conditions hold for core {core:?} (l={l}, d={d}) but no flower"
                ));
            }
        }
    }
    if premise_true < 2000 {
        failures.push(format!("only {premise_true} of {total} trials satisfied the premise"));
    }
    finish(
        "counting conditions",
        format!("{total} (family, core, l) trials, premise held {premise_true} times, conclusion always followed"),
        failures,
    );
}

#[test]
fn t06_flower_and_sunflower_search_above_guarantee_bounds() {
    use rand::SeedableRng;
    let mut failures = Vec::new();
    let mut flowers = 0u32;
    let mut sunflowers = 0u32;
    for d in 1usize..=3 {
        for l in 2u64..=4 {
            for rep in 0..56 {
                let seed = (d as u64) << 32 | l << 16 | rep;
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);

                let want = (l - 1).pow(d as u32) as usize + 1;
                let family = distinct_uniform(&mut rng, d, want, 12);
                match find_flower(&family, l, d) {
                    Ok(w) => {
                        flowers += 1;
                        if !is_flower(&family, &w.core, l) {
                            failures.push(format!("flower d={d} l={l} rep={rep}: bad witness"));
                        }
                    }
                    Err(e) => failures.push(format!("flower d={d} l={l} rep={rep}: {e}")),
                }

                let fact: u64 = (1..=d as u64).product();
                let want = (fact * (l - 1).pow(d as u32)) as usize + 1;
                let family = distinct_uniform(&mut rng, d, want, 14);
                match find_sunflower(&family, l, d) {
                    Ok(w) => {
                        sunflowers += 1;
                        if w.petal_indices.len() < l as usize {
                            failures.push(format!("sunflower d={d} l={l} rep={rep}: too few petals"));
                        }
                        for (a, &i) in w.petal_indices.iter().enumerate() {
                            for &j in &w.petal_indices[a + 1..] {
                                let inter: Vec<u32> = family[i]
                                    .iter()
                                    .copied()
                                    .filter(|e| family[j].contains(e))
                                    .collect();
                                if inter != w.core {
                                    failures.push(format!(
                                        "sunflower d={d} l={l} rep={rep}: intersection mismatch"
                                    ));
                                }
                            }
                        }
                    }
                    Err(e) => failures.push(format!("sunflower d={d} l={l} rep={rep}: {e}")),
                }
            }
        }
    }
    finish(
        "guaranteed witness search",
        format!("{flowers} flowers and {sunflowers} sunflowers found and verified just above the size bounds"),
        failures,
    );
}

/// Distinct d-uniform sets over `1..=n`; panics if the universe is too small.
fn distinct_uniform(rng: &mut rand_chacha::ChaCha8Rng, d: usize, want: usize, n: u32) -> Vec<Vec<u32>> {
    use std::collections::BTreeSet;
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(want);
    while out.len() < want {
        let mut set: Vec<u32> =
            rand::seq::index::sample(rng, n as usize, d).iter().map(|i| i as u32 + 1).collect();
        set.sort_unstable();
        if seen.insert(set.clone()) {
            out.push(set);
        }
    }
    out
}

#[test]
fn t07_edge_dominating_kernel_equivalence_and_bounds() {
    let mut failures = Vec::new();
    let total = 300;
    for seed in 0..total {
        let n = 4 + (seed % 5) as u32;
        let max = n * (n - 1) / 2;
        let m = (seed * 3) as u32 % (max + 1);
        let k = 1 + (seed % 2) as u32;
        let g = gen_graph_instance(n, m, k, seed).unwrap();
        let kernel = kernelize_eds(&g);
        let before = min_eds_size(&g, k as usize) <= k as usize;
        let after = min_eds_size(&kernel, kernel.k as usize) <= kernel.k as usize;
        if before != after {
            failures.push(format!("seed {seed}: input answer {before}, kernel answer {after}"));
        }
        if kernel.m() as u64 > eds_edge_bound(k) {
            failures.push(format!(
                "seed {seed}: {} edges, bound {}",
                kernel.m(),
                eds_edge_bound(k)
            ));
        }
    }
    finish(
        "edge dominating set kernel",
        format!("{total} graphs answer-equivalent within the edge bound"),
        failures,
    );
}

#[test]
fn t08_triangle_graph_kernels_equivalence_and_bounds() {
    let mut failures = Vec::new();
    let total = 300;
    let triangle = Pattern::triangle();
    let patterns = PatternSet::single(Pattern::triangle());
    for seed in 0..total {
        let n = 4 + (seed % 5) as u32;
        let max = n * (n - 1) / 2;
        let m = (seed * 5) as u32 % (max + 1);
        let k = 1 + (seed % 2) as u32;
        let g = gen_graph_instance(n, m, k, seed + 3000).unwrap();

        let kernel = kernelize_hfree_vd(&g, &patterns);
        let before = triangle_deletion_solves(&g, k);
        let after = triangle_deletion_solves(&kernel, kernel.k);
        if before != after {
            failures.push(format!("seed {seed} deletion: input {before}, kernel {after}"));
        }
        let bound = 3 * (k as u64 + 1).pow(3);
        if kernel.m() as u64 > bound {
            failures.push(format!("seed {seed} deletion: {} edges, bound {bound}", kernel.m()));
        }

        let kernel = kernelize_hpack(&g, &triangle);
        let before = max_packing_size(&triangles_of(&g), k as usize) >= k as usize;
        let after =
            max_packing_size(&triangles_of(&kernel), kernel.k as usize) >= kernel.k as usize;
        if before != after {
            failures.push(format!("seed {seed} packing: input {before}, kernel {after}"));
        }
        let bound = 3 * packing_threshold_base(3, k).pow(3);
        if kernel.m() as u64 > bound {
            failures.push(format!("seed {seed} packing: {} edges, bound {bound}", kernel.m()));
        }
    }
    finish(
        "triangle graph kernels",
        format!("{total} graphs for deletion and packing, answers and edge bounds held"),
        failures,
    );
}

#[test]
fn t09_streaming_space_stays_logarithmic() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut ratios = Vec::new();
    let mut detail = String::new();
    for (i, m) in [100u32, 1_000, 10_000].into_iter().enumerate() {
        let d = 2;
        let inst = gen_set_instance(SetKind::HittingSet, d, 25, m, 1, 71 + i as u64).unwrap();
        let bytes = inst.to_text().len() as u64;
        let log_n = 64 - (bytes + 1).leading_zeros() as u64;
        let (_, report) = kernelize_hs_logspace_metered(&inst, None).unwrap();
        let cap = SPACE_CONSTANT * (d as u64 * d as u64) * log_n;
        if report.peak_bits > cap {
            failures.push(format!("m={m}: peak {} bits exceeds {cap}", report.peak_bits));
        }
        ratios.push(report.peak_bits as f64 / (bytes as f64).log2());
        detail.push_str(&format!("m={m}: peak={} bits; ", report.peak_bits));
    }
    let (lo, hi) = (
        ratios.iter().cloned().fold(f64::INFINITY, f64::min),
        ratios.iter().cloned().fold(0.0, f64::max),
    );
    if hi / lo > 2.0 {
        failures.push(format!("peak/log2(bytes) drifted {:.2}x across the range", hi / lo));
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 600.0 {
        failures.push(format!("sweep took {secs:.0}s, budget is 600s"));
    }
    finish(
        "streaming space envelope",
        format!("{detail}drift {:.2}x ({secs:.1}s)", hi / lo),
        failures,
    );
}

#[test]
fn t10_linear_pass_visit_and_read_budgets() {
    let mut failures = Vec::new();
    let total = 100;
    for seed in 0..total {
        let d = 1 + (seed % 3) as u32;
        let k = 1 + (seed % 3) as u32;
        let inst = gen_set_instance(SetKind::HittingSet, d, 10, 30, k, seed + 7000).unwrap();
        let ordered = sort_family(&inst);
        let tape = InputTape::new(&ordered.family);
        let mut run = LinearKernelRun::new(d, k as u64 + 1);
        for t in 0..ordered.family.len() {
            run.step(tape.read_set(t).unwrap());
        }
        if tape.reads() != ordered.family.len() as u64 {
            failures.push(format!(
                "seed {seed}: {} reads for {} sets",
                tape.reads(),
                ordered.family.len()
            ));
        }
        let budget = d as u64 * (1u64 << d) * inst.m() as u64;
        if run.node_visits() > budget {
            failures.push(format!(
                "seed {seed}: {} trie visits, budget {budget}",
                run.node_visits()
            ));
        }
    }
    finish(
        "linear pass budgets",
        format!("{total} families processed in one read per set, trie visits within d*2^d*m"),
        failures,
    );
}
