//! Command-line frontend: kernelize, solve, verify, gen, stats, flower.
//!
//! Exit codes: 0 success, 1 flag misuse (valid flags in an unsupported
//! combination), 2 unusable input (unreadable files, malformed instances,
//! oversized verification inputs, bad generator parameters), 3 correctness
//! failures (verification disagreement, audit failure, space budget
//! exceeded).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process;

use clap::{Args, Parser, Subcommand, ValueEnum};

use kernelforge::eds::{eds_edge_bound, kernelize_eds_metered};
use kernelforge::graphs::{kernelize_hfree_vd_metered, kernelize_hpack_metered};
use kernelforge::hs_logspace::kernelize_hs_logspace_metered;
use kernelforge::instance::{
    canonical_relabel, gen_graph_instance, gen_set_instance, parse_instance, AnyInstance,
    GraphInstance, Instance, Pattern, PatternSet, SetKind,
};
use kernelforge::linear::{sort_family, LinearKernelRun};
use kernelforge::oracles::{
    find_flower, max_packing_size, min_eds_size, min_hitting_set_size, FlowerError,
};
use kernelforge::sp_logspace::{kernelize_sp_logspace_metered, packing_threshold_base};
use kernelforge::stream::RunReport;

const BUDGET_ENV: &str = "KERNELFORGE_BIT_BUDGET";

#[derive(Parser)]
#[command(name = "kernelforge", about = "Kernelization toolkit for set and graph problems")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Shrink an instance to an equivalent one of parameter-bounded size.
    Kernelize(KernelizeArgs),
    /// Compute the exact (truncated) optimum by brute force.
    Solve(SolveArgs),
    /// Check that an instance and its kernel give the same answer.
    Verify(VerifyArgs),
    /// Generate a seeded random instance.
    Gen(GenArgs),
    /// Print summary statistics of an instance file.
    Stats(StatsArgs),
    /// Search a family for a flower with a small core.
    Flower(FlowerArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Problem {
    Hs,
    Sp,
    Eds,
    Hfree,
    Hpack,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Logspace,
    Linear,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveProblem {
    Hs,
    Sp,
    Eds,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Hs,
    Sp,
    Gr,
}

#[derive(Args)]
struct KernelizeArgs {
    #[arg(long, value_enum)]
    problem: Problem,
    #[arg(long, value_enum)]
    mode: Mode,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    /// Append a cost line (space/reads for streaming, trie visits for linear).
    #[arg(long)]
    trace: bool,
    /// Pattern for hfree/hpack: `k3`, `p3`, or `@file` in `p pat` format.
    /// Repeatable for hfree.
    #[arg(long)]
    pattern: Vec<String>,
    /// Skip the sort prepass (linear mode only).
    #[arg(long)]
    no_sort: bool,
    /// Re-check the stored-family bound after every step (linear mode only).
    #[arg(long)]
    audit: bool,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    problem: SolveProblem,
    #[arg(long)]
    input: PathBuf,
    /// Search is truncated at this solution size.
    #[arg(long)]
    cap: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    problem: SolveProblem,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    kernel: Option<PathBuf>,
    /// Check every `<stem>.in` / `<stem>.kernel` pair in a directory.
    #[arg(long)]
    corpus: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: GenKind,
    /// Maximum set size (hs/sp only).
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    m: u32,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    seed: u64,
    /// Defaults to stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct FlowerArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    l: u64,
    /// Overrides the arity from the file header.
    #[arg(long)]
    d: Option<u32>,
}

struct Failure {
    code: i32,
    msg: String,
}

fn fail(code: i32, msg: impl Into<String>) -> Failure {
    Failure { code, msg: msg.into() }
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Kernelize(a) => cmd_kernelize(a),
        Cmd::Solve(a) => cmd_solve(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Stats(a) => cmd_stats(a),
        Cmd::Flower(a) => cmd_flower(a),
    };
    if let Err(f) = result {
        eprintln!("error: {}", f.msg);
        process::exit(f.code);
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(2, format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| fail(2, format!("{}: {e}", path.display())))
}

fn parse_file(path: &Path) -> Result<AnyInstance, Failure> {
    parse_instance(&read_file(path)?).map_err(|e| fail(2, format!("{}: {e}", path.display())))
}

fn expect_sets(inst: AnyInstance, kind: SetKind, path: &Path) -> Result<Instance, Failure> {
    match inst {
        AnyInstance::Sets(i) if i.kind == kind => Ok(i),
        _ => Err(fail(
            2,
            format!("{}: expected a `p {}` instance", path.display(), kind.token()),
        )),
    }
}

fn expect_graph(inst: AnyInstance, path: &Path) -> Result<GraphInstance, Failure> {
    match inst {
        AnyInstance::Graph(g) => Ok(g),
        _ => Err(fail(2, format!("{}: expected a `p gr` instance", path.display()))),
    }
}

fn bit_budget() -> Result<Option<u64>, Failure> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .parse()
            .map(Some)
            .map_err(|_| fail(2, format!("{BUDGET_ENV} must be an integer, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

fn resolve_pattern(name: &str) -> Result<Pattern, Failure> {
    match name {
        "k3" => Ok(Pattern::triangle()),
        "p3" => Ok(Pattern::path3()),
        _ => match name.strip_prefix('@') {
            Some(path) => {
                let path = Path::new(path);
                Pattern::parse(&read_file(path)?)
                    .map_err(|e| fail(2, format!("{}: {e}", path.display())))
            }
            None => Err(fail(1, format!("unknown pattern {name:?}; use k3, p3 or @file"))),
        },
    }
}

fn pow_sat(base: u64, exp: u32) -> u64 {
    base.saturating_pow(exp)
}

fn cmd_kernelize(a: KernelizeArgs) -> Result<(), Failure> {
    let streaming_only = matches!(a.problem, Problem::Eds | Problem::Hfree | Problem::Hpack);
    if streaming_only && a.mode == Mode::Linear {
        let name = match a.problem {
            Problem::Eds => "eds",
            Problem::Hfree => "hfree",
            Problem::Hpack => "hpack",
            _ => unreachable!(),
        };
        return Err(fail(1, format!("linear mode unavailable for {name}")));
    }
    if (a.no_sort || a.audit) && a.mode != Mode::Linear {
        return Err(fail(1, "--no-sort and --audit only apply to linear mode"));
    }
    if !a.pattern.is_empty() && !matches!(a.problem, Problem::Hfree | Problem::Hpack) {
        return Err(fail(1, "--pattern only applies to hfree and hpack"));
    }

    let budget = bit_budget()?;
    let parsed = parse_file(&a.input)?;

    let mut trace_line = None;
    let (text, sets_in, sets_out, bound) = match a.problem {
        Problem::Hs | Problem::Sp => {
            let kind = if a.problem == Problem::Hs { SetKind::HittingSet } else { SetKind::SetPacking };
            let inst = expect_sets(parsed, kind, &a.input)?;
            let bound = match kind {
                SetKind::HittingSet => pow_sat(inst.k as u64 + 1, inst.d),
                SetKind::SetPacking => pow_sat(packing_threshold_base(inst.d, inst.k), inst.d),
            };
            let kernel = match a.mode {
                Mode::Logspace => {
                    let (kernel, report) = run_streaming_sets(&inst, budget)?;
                    if a.trace {
                        trace_line = Some(report.to_string());
                    }
                    kernel
                }
                Mode::Linear => {
                    let (kernel, visits) = run_linear(&inst, !a.no_sort, a.audit)?;
                    if a.trace {
                        trace_line = Some(format!("node_visits={visits}"));
                    }
                    kernel
                }
            };
            (kernel.to_text(), inst.m(), kernel.m(), bound)
        }
        Problem::Eds => {
            let g = expect_graph(parsed, &a.input)?;
            let (kernel, report) =
                kernelize_eds_metered(&g, budget).map_err(|e| fail(3, e.to_string()))?;
            if a.trace {
                trace_line = Some(report.to_string());
            }
            (kernel.to_text(), g.m(), kernel.m(), eds_edge_bound(g.k))
        }
        Problem::Hfree => {
            let g = expect_graph(parsed, &a.input)?;
            if a.pattern.is_empty() {
                return Err(fail(1, "hfree needs at least one --pattern"));
            }
            let patterns = PatternSet {
                patterns: a.pattern.iter().map(|p| resolve_pattern(p)).collect::<Result<_, _>>()?,
            };
            let d = patterns.max_size();
            let (kernel, report) = kernelize_hfree_vd_metered(&g, &patterns, budget)
                .map_err(|e| fail(3, e.to_string()))?;
            if a.trace {
                trace_line = Some(report.to_string());
            }
            let bound = (d as u64 * (d as u64).saturating_sub(1) / 2)
                .saturating_mul(pow_sat(g.k as u64 + 1, d));
            (kernel.to_text(), g.m(), kernel.m(), bound)
        }
        Problem::Hpack => {
            let g = expect_graph(parsed, &a.input)?;
            if a.pattern.len() != 1 {
                return Err(fail(1, "hpack needs exactly one --pattern"));
            }
            let p = resolve_pattern(&a.pattern[0])?;
            let d = p.n;
            let (kernel, report) = kernelize_hpack_metered(&g, &p, budget)
                .map_err(|e| fail(3, e.to_string()))?;
            if a.trace {
                trace_line = Some(report.to_string());
            }
            let bound = (d as u64 * (d as u64).saturating_sub(1) / 2)
                .saturating_mul(pow_sat(packing_threshold_base(d, g.k), d));
            (kernel.to_text(), g.m(), kernel.m(), bound)
        }
    };

    write_file(&a.output, &text)?;
    println!("sets_in={sets_in} sets_out={sets_out} bound={bound}");
    if let Some(line) = trace_line {
        println!("{line}");
    }
    Ok(())
}

fn run_streaming_sets(inst: &Instance, budget: Option<u64>) -> Result<(Instance, RunReport), Failure> {
    let result = match inst.kind {
        SetKind::HittingSet => kernelize_hs_logspace_metered(inst, budget),
        SetKind::SetPacking => kernelize_sp_logspace_metered(inst, budget),
    };
    result.map_err(|e| fail(3, e.to_string()))
}

fn run_linear(inst: &Instance, sort: bool, audit: bool) -> Result<(Instance, u64), Failure> {
    if inst.kind == SetKind::SetPacking && inst.k == 0 {
        return Ok((inst.clone(), 0));
    }
    let base = match inst.kind {
        SetKind::HittingSet => inst.k as u64 + 1,
        SetKind::SetPacking => packing_threshold_base(inst.d, inst.k),
    };
    let ordered = if sort { sort_family(inst) } else { inst.clone() };
    let mut run = LinearKernelRun::new(inst.d, base);
    for (t, set) in ordered.family.iter().enumerate() {
        run.step(set);
        if audit && !run.audit_invariant() {
            return Err(fail(3, format!("stored-family bound violated after step {}", t + 1)));
        }
    }
    let visits = run.node_visits();
    let kept = Instance {
        kind: inst.kind,
        d: inst.d,
        n: inst.n,
        k: inst.k,
        family: run.finish(),
    };
    Ok((canonical_relabel(&kept), visits))
}

fn cmd_solve(a: SolveArgs) -> Result<(), Failure> {
    let parsed = parse_file(&a.input)?;
    let value = match a.problem {
        SolveProblem::Hs => {
            let i = expect_sets(parsed, SetKind::HittingSet, &a.input)?;
            min_hitting_set_size(&i.family, a.cap)
        }
        SolveProblem::Sp => {
            let i = expect_sets(parsed, SetKind::SetPacking, &a.input)?;
            max_packing_size(&i.family, a.cap)
        }
        SolveProblem::Eds => {
            let g = expect_graph(parsed, &a.input)?;
            min_eds_size(&g, a.cap)
        }
    };
    println!("{value}");
    Ok(())
}

/// One verified input/kernel pair: the status text plus whether they agree.
fn verify_pair(problem: SolveProblem, input: &Path, kernel: &Path) -> Result<(bool, String), Failure> {
    let a = parse_file(input)?;
    let b = parse_file(kernel)?;
    match problem {
        SolveProblem::Hs | SolveProblem::Sp => {
            let kind = match problem {
                SolveProblem::Hs => SetKind::HittingSet,
                _ => SetKind::SetPacking,
            };
            let a = expect_sets(a, kind, input)?;
            let b = expect_sets(b, kind, kernel)?;
            for side in [&a, &b] {
                if side.n > 20 {
                    return Err(fail(2, format!("n={} too large to verify (limit 20)", side.n)));
                }
            }
            match kind {
                SetKind::HittingSet => {
                    let (va, vb) = (
                        min_hitting_set_size(&a.family, a.k as usize),
                        min_hitting_set_size(&b.family, b.k as usize),
                    );
                    let agree = (va <= a.k as usize) == (vb <= b.k as usize);
                    let line = format!(
                        "hs: {} {}",
                        min_token("in", va, a.k as usize),
                        min_token("kernel", vb, b.k as usize)
                    );
                    Ok((agree, line))
                }
                SetKind::SetPacking => {
                    let (va, vb) = (
                        max_packing_size(&a.family, a.k as usize),
                        max_packing_size(&b.family, b.k as usize),
                    );
                    let agree = (va >= a.k as usize) == (vb >= b.k as usize);
                    let line = format!("sp: in={va} kernel={vb}");
                    Ok((agree, line))
                }
            }
        }
        SolveProblem::Eds => {
            let a = expect_graph(a, input)?;
            let b = expect_graph(b, kernel)?;
            for side in [&a, &b] {
                if side.n > 12 {
                    return Err(fail(2, format!("n={} too large to verify (limit 12)", side.n)));
                }
            }
            let (va, vb) = (min_eds_size(&a, a.k as usize), min_eds_size(&b, b.k as usize));
            let agree = (va <= a.k as usize) == (vb <= b.k as usize);
            let line = format!(
                "eds: {} {}",
                min_token("in", va, a.k as usize),
                min_token("kernel", vb, b.k as usize)
            );
            Ok((agree, line))
        }
    }
}

/// `in≤3` when a solution of that size exists, `in>2` when the search was
/// exhausted at the cap.
fn min_token(side: &str, value: usize, cap: usize) -> String {
    if value <= cap {
        format!("{side}\u{2264}{value}")
    } else {
        format!("{side}>{cap}")
    }
}

fn cmd_verify(a: VerifyArgs) -> Result<(), Failure> {
    match (&a.corpus, &a.input, &a.kernel) {
        (Some(dir), None, None) => {
            let mut stems: Vec<PathBuf> = fs::read_dir(dir)
                .map_err(|e| fail(2, format!("{}: {e}", dir.display())))?
                .filter_map(|entry| entry.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "in"))
                .collect();
            stems.sort();
            if stems.is_empty() {
                return Err(fail(2, format!("{}: no *.in files", dir.display())));
            }
            let mut all_agree = true;
            for input in &stems {
                let kernel = input.with_extension("kernel");
                let (agree, line) = verify_pair(a.problem, input, &kernel)?;
                let stem = input.file_stem().unwrap_or_default().to_string_lossy();
                println!("{stem}: {line}");
                all_agree &= agree;
            }
            if all_agree {
                Ok(())
            } else {
                Err(fail(3, "kernel answer disagrees with input"))
            }
        }
        (None, Some(input), Some(kernel)) => {
            let (agree, line) = verify_pair(a.problem, input, kernel)?;
            println!("{line}");
            if agree {
                Ok(())
            } else {
                Err(fail(3, "kernel answer disagrees with input"))
            }
        }
        _ => Err(fail(1, "pass either --input with --kernel, or --corpus")),
    }
}

fn cmd_gen(a: GenArgs) -> Result<(), Failure> {
    let text = match a.kind {
        GenKind::Hs | GenKind::Sp => {
            let d = a.d.ok_or_else(|| fail(1, "--d is required for hs/sp"))?;
            let kind = if matches!(a.kind, GenKind::Hs) { SetKind::HittingSet } else { SetKind::SetPacking };
            gen_set_instance(kind, d, a.n, a.m, a.k, a.seed)
                .map_err(|e| fail(2, e.to_string()))?
                .to_text()
        }
        GenKind::Gr => {
            if a.d.is_some() {
                return Err(fail(1, "--d does not apply to gr"));
            }
            gen_graph_instance(a.n, a.m, a.k, a.seed)
                .map_err(|e| fail(2, e.to_string()))?
                .to_text()
        }
    };
    match &a.output {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_stats(a: StatsArgs) -> Result<(), Failure> {
    let mut out = String::new();
    match parse_file(&a.input)? {
        AnyInstance::Sets(i) => {
            writeln!(
                out,
                "kind={} d={} n={} m={} k={}",
                i.kind.token(),
                i.d,
                i.n,
                i.m(),
                i.k
            )
            .unwrap();
            for s in 1..=i.d as usize {
                let count = i.family.iter().filter(|f| f.len() == s).count();
                writeln!(out, "size {s}: {count}").unwrap();
            }
        }
        AnyInstance::Graph(g) => {
            writeln!(out, "kind=gr n={} m={} k={}", g.n, g.m(), g.k).unwrap();
            writeln!(out, "size 2: {}", g.m()).unwrap();
        }
    }
    print!("{out}");
    Ok(())
}

fn cmd_flower(a: FlowerArgs) -> Result<(), Failure> {
    let family = match parse_file(&a.input)? {
        AnyInstance::Sets(i) => i,
        AnyInstance::Graph(_) => {
            return Err(fail(2, format!("{}: expected a set-family instance", a.input.display())))
        }
    };
    let d = a.d.unwrap_or(family.d) as usize;
    match find_flower(&family.family, a.l, d) {
        Ok(witness) => {
            if witness.core.is_empty() {
                println!("core: (empty)");
            } else {
                let core: Vec<String> = witness.core.iter().map(u32::to_string).collect();
                println!("core: {}", core.join(" "));
            }
            Ok(())
        }
        Err(FlowerError::FamilyTooSmall { .. }) => {
            println!("none guaranteed");
            Ok(())
        }
        Err(e @ FlowerError::VerificationFailed) => Err(fail(3, e.to_string())),
        Err(e) => Err(fail(2, e.to_string())),
    }
}
