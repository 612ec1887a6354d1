//! Benchmark CLI: generate or load graphs, run the ordered algorithms under
//! a schedule, verify against the serial oracles, tune schedules, and emit
//! JSON reports.
//!
//! Exit codes: 0 ok, 1 I/O or parse failure, 2 configuration failure,
//! 3 verification failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use bucketgraph::algorithms::{self, oracles, AlgoKind, ProblemInstance, RunOutput};
use bucketgraph::engine::{ParallelGrain, Schedule, TraversalDirection, UpdateStrategy};
use bucketgraph::graph::{io, synth, CoordinateTable, Graph, Vid};
use bucketgraph::report::{GraphDesc, RunReport};
use bucketgraph::runtime::Runtime;
use bucketgraph::tune::{self, default_schedule, validate_schedule};
use bucketgraph::{Error, Result};

#[derive(Parser)]
#[command(
    name = "bucketgraph",
    version,
    about = "Parallel ordered graph algorithms with bucketed priority scheduling"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one algorithm under one schedule and write result + report.
    Run(RunArgs),
    /// Run every valid (strategy x direction) pair against the serial oracle.
    Verify(VerifyArgs),
    /// Generate a synthetic graph file.
    Gen(GenArgs),
    /// Search the schedule space for the fastest valid schedule.
    Tune(TuneArgs),
    /// Time a (graph x strategy) matrix and print time + rounds per cell.
    Bench(BenchArgs),
}

#[derive(Args, Clone)]
struct ScheduleArgs {
    /// Update strategy: eager_with_fusion | eager_no_fusion | lazy | lazy_constant_sum
    #[arg(long)]
    schedule: Option<String>,
    /// Priority coarsening factor.
    #[arg(long)]
    delta: Option<u32>,
    #[arg(long)]
    fusion_threshold: Option<usize>,
    #[arg(long)]
    num_buckets: Option<usize>,
    /// SparsePush | DensePull
    #[arg(long)]
    direction: Option<String>,
    /// static | dynamic vertex-parallel grain
    #[arg(long)]
    grain: Option<String>,
    /// Deduplicate buffered bucket updates (lazy strategies).
    #[arg(long)]
    dedup: Option<bool>,
}

impl ScheduleArgs {
    fn build(&self, algo: AlgoKind) -> Result<Schedule> {
        let mut sched = default_schedule(algo);
        if let Some(s) = &self.schedule {
            sched.update_strategy = UpdateStrategy::from_str(s)?;
        }
        if let Some(d) = self.delta {
            sched.delta = d;
        }
        if let Some(t) = self.fusion_threshold {
            sched.fusion_threshold = t;
        }
        if let Some(b) = self.num_buckets {
            sched.num_open_buckets = b;
        }
        if let Some(dir) = &self.direction {
            sched.direction = TraversalDirection::from_str(dir)?;
        }
        if let Some(g) = &self.grain {
            sched.parallel_grain = match g.to_ascii_lowercase().as_str() {
                "static" | "vertex-parallel-static" => ParallelGrain::VertexParallelStatic,
                "dynamic" | "vertex-parallel-dynamic" => ParallelGrain::VertexParallelDynamic,
                other => return Err(Error::Config(format!("unknown grain '{other}'"))),
            };
        }
        if let Some(d) = self.dedup {
            sched.dedup = d;
        }
        Ok(sched)
    }
}

#[derive(Args, Clone)]
struct InstanceArgs {
    #[arg(long)]
    algo: String,
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 0)]
    source: Vid,
    #[arg(long)]
    target: Option<Vid>,
    /// Coordinate file for A*.
    #[arg(long)]
    coords: Option<PathBuf>,
    /// Set cover: vertices [0, num_sets) are sets.
    #[arg(long)]
    num_sets: Option<usize>,
    /// Set cover near-independence slack.
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    /// Seed for the set cover selection permutation.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Symmetrize the loaded graph (implied for kcore/setcover).
    #[arg(long, default_value_t = false)]
    symmetrize: bool,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

struct LoadedInstance {
    graph: Graph,
    coords: Option<CoordinateTable>,
    algo: AlgoKind,
}

impl InstanceArgs {
    fn load(&self, needs_in_edges: bool) -> Result<LoadedInstance> {
        let algo = AlgoKind::from_str(&self.algo)?;
        let symmetrize = self.symmetrize || matches!(algo, AlgoKind::KCore | AlgoKind::SetCover);
        let build_in = needs_in_edges && !symmetrize;
        let graph = io::load_weighted_edge_list(&self.graph, symmetrize, build_in)?;
        let coords = match &self.coords {
            Some(p) => Some(io::load_coords(p, graph.num_vertices())?),
            None => None,
        };
        Ok(LoadedInstance {
            graph,
            coords,
            algo,
        })
    }

    fn instance<'a>(&self, loaded: &'a LoadedInstance) -> Result<ProblemInstance<'a>> {
        if loaded.algo == AlgoKind::SetCover && self.num_sets.is_none() {
            return Err(Error::Config("setcover needs --num-sets".into()));
        }
        if loaded.algo.needs_target() && self.target.is_none() {
            return Err(Error::Config(format!("{} needs --target", loaded.algo)));
        }
        Ok(ProblemInstance {
            graph: &loaded.graph,
            coords: loaded.coords.as_ref(),
            source: self.source,
            target: self.target,
            num_sets: self.num_sets.unwrap_or(0),
            epsilon: self.epsilon,
            seed: self.seed,
        })
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    inst: InstanceArgs,
    #[command(flatten)]
    sched: ScheduleArgs,
    /// Average timing over the sources listed in this file (one id per line).
    #[arg(long)]
    sources_file: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    inst: InstanceArgs,
}

#[derive(Args)]
struct GenArgs {
    /// path | grid | uniform_random
    #[arg(long)]
    kind: String,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    /// Fixed edge weight (overrides the range).
    #[arg(long)]
    weight: Option<u32>,
    /// Uniform weight range [wlo, whi); defaults to [1, 1000).
    #[arg(long, default_value_t = 1)]
    wlo: u32,
    #[arg(long, default_value_t = 1000)]
    whi: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Where to write grid coordinates (defaults to <out>.coords).
    #[arg(long)]
    coords_out: Option<PathBuf>,
}

#[derive(Args)]
struct TuneArgs {
    #[command(flatten)]
    inst: InstanceArgs,
    #[arg(long, default_value_t = 20)]
    budget: u64,
    #[arg(long = "tune-seed", default_value_t = 0)]
    tune_seed: u64,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    inst: InstanceArgs,
    /// Additional graph files for the matrix.
    #[arg(long)]
    more_graphs: Vec<PathBuf>,
    /// Comma-separated strategies to compare.
    #[arg(long, default_value = "eager_with_fusion,eager_no_fusion,lazy")]
    strategies: String,
    #[command(flatten)]
    sched: ScheduleArgs,
    /// Timed runs per cell (median reported).
    #[arg(long, default_value_t = 3)]
    runs: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Run(a) => cmd_run(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Tune(a) => cmd_tune(a),
        Cmd::Bench(a) => cmd_bench(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn cmd_run(args: RunArgs) -> Result<u8> {
    let algo = AlgoKind::from_str(&args.inst.algo)?;
    let sched = args.sched.build(algo)?;
    let loaded = args
        .inst
        .load(sched.direction == TraversalDirection::DensePull)?;
    validate_schedule(algo, &sched, loaded.graph.has_in_edges())?;
    let rt = Runtime::new(args.inst.threads)?;

    let sources: Vec<Vid> = match &args.sources_file {
        Some(p) => read_sources(p)?,
        None => vec![args.inst.source],
    };
    if sources.is_empty() {
        return Err(Error::Config("sources file lists no vertices".into()));
    }

    let mut first_output: Option<RunOutput> = None;
    let mut total_ms = 0.0;
    for &source in &sources {
        let mut inst = args.inst.instance(&loaded)?;
        inst.source = source;
        let out = algorithms::run_algorithm(algo, &inst, &sched, &rt)?;
        total_ms += out.stats.time_ms;
        if first_output.is_none() {
            first_output = Some(out);
        }
    }
    let mut out = first_output.expect("at least one source");
    out.stats.time_ms = total_ms / sources.len() as f64;

    if let Some(path) = &args.out {
        io::write_text(path, &out.text)?;
    }
    let report = RunReport::new(
        algo.name(),
        GraphDesc {
            n: loaded.graph.num_vertices(),
            m: loaded.graph.num_edges(),
            source: Some(args.inst.source),
            target: args.inst.target,
        },
        sched,
        rt.threads(),
        &out.stats,
        out.digest,
    );
    let json = serde_json::to_string_pretty(&report).expect("report serialization");
    match &args.report {
        Some(path) => io::write_text(path, &json)?,
        None => println!("{json}"),
    }
    Ok(0)
}

fn read_sources(path: &Path) -> Result<Vec<Vid>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        out.push(t.parse().map_err(|_| Error::Parse {
            path: path.display().to_string(),
            line: idx + 1,
            msg: "expected a vertex id".into(),
        })?);
    }
    Ok(out)
}

/// Every valid (strategy x direction) combination for an algorithm on a
/// given graph.
fn verification_matrix(algo: AlgoKind, has_in_edges: bool) -> Vec<Schedule> {
    let mut out = Vec::new();
    for strat in tune::valid_strategies(algo) {
        for dir in [
            TraversalDirection::SparsePush,
            TraversalDirection::DensePull,
        ] {
            let sched = Schedule {
                update_strategy: strat,
                direction: dir,
                delta: if algo.allows_coarsening() { 4 } else { 1 },
                ..default_schedule(algo)
            };
            if validate_schedule(algo, &sched, has_in_edges).is_ok() {
                out.push(sched);
            }
        }
    }
    out
}

fn cmd_verify(args: VerifyArgs) -> Result<u8> {
    let algo = AlgoKind::from_str(&args.inst.algo)?;
    let loaded = args.inst.load(true)?;
    let inst = args.inst.instance(&loaded)?;
    let rt = Runtime::new(args.inst.threads)?;
    let g = &loaded.graph;

    let mut failures = 0usize;
    let schedules = verification_matrix(algo, g.has_in_edges());
    for sched in &schedules {
        let label = format!("{} [{} {}]", algo, sched.update_strategy, sched.direction);
        match verify_once(algo, &inst, sched, &rt) {
            Ok(None) => println!("verify {label}: PASS"),
            Ok(Some(msg)) => {
                println!("verify {label}: FAIL {msg}");
                failures += 1;
            }
            Err(e) => {
                println!("verify {label}: ERROR {e}");
                failures += 1;
            }
        }
    }
    if failures == 0 {
        println!(
            "verify: all {} schedule combinations match the oracle",
            schedules.len()
        );
        Ok(0)
    } else {
        Ok(3)
    }
}

/// Runs once and compares against the serial oracle; `Some(msg)` describes
/// the first mismatch.
fn verify_once(
    algo: AlgoKind,
    inst: &ProblemInstance,
    sched: &Schedule,
    rt: &Runtime,
) -> Result<Option<String>> {
    let g = inst.graph;
    match algo {
        AlgoKind::Sssp | AlgoKind::Wbfs => {
            let got = match algo {
                AlgoKind::Sssp => algorithms::sssp_delta_stepping(g, inst.source, sched, rt)?,
                _ => algorithms::wbfs(g, inst.source, sched, rt)?,
            };
            let want = oracles::dijkstra_oracle(g, inst.source);
            Ok(first_diff(&got.dist, &want))
        }
        AlgoKind::Ppsp => {
            let t = inst.target.expect("checked");
            let got = algorithms::ppsp(g, inst.source, t, sched, rt)?;
            let want = oracles::dijkstra_oracle(g, inst.source)[t as usize];
            Ok((got.distance != want)
                .then(|| format!("target {t}: got {} want {want}", got.distance)))
        }
        AlgoKind::Astar => {
            let t = inst.target.expect("checked");
            let coords = inst.coords.expect("checked");
            let got = algorithms::astar(g, coords, inst.source, t, sched, rt)?;
            let want = oracles::dijkstra_oracle(g, inst.source)[t as usize];
            Ok((got.distance != want)
                .then(|| format!("target {t}: got {} want {want}", got.distance)))
        }
        AlgoKind::KCore => {
            let got = algorithms::kcore(g, sched, rt)?;
            let want = oracles::kcore_oracle(g);
            Ok(first_diff(&got.coreness, &want))
        }
        AlgoKind::SetCover => {
            let r = algorithms::setcover(g, inst.num_sets, inst.epsilon, inst.seed, sched, rt)?;
            let greedy = oracles::greedy_setcover_oracle(g, inst.num_sets)?;
            for (e, &c) in r.covered.iter().enumerate() {
                let coverable = !g.out_neighbors((inst.num_sets + e) as Vid).is_empty();
                if coverable && !c {
                    return Ok(Some(format!("element {e} left uncovered")));
                }
            }
            if !greedy.is_empty() && r.chosen.len() > 2 * greedy.len() {
                return Ok(Some(format!(
                    "cover cost {} exceeds 2x greedy ({})",
                    r.chosen.len(),
                    greedy.len()
                )));
            }
            Ok(None)
        }
    }
}

fn first_diff(got: &[i32], want: &[i32]) -> Option<String> {
    got.iter().zip(want).position(|(a, b)| a != b).map(|v| {
        format!(
            "first differing vertex {v}: got {} want {}",
            got[v], want[v]
        )
    })
}

fn cmd_gen(args: GenArgs) -> Result<u8> {
    let weights = match args.weight {
        Some(w) => synth::WeightGen::Fixed(w),
        None => synth::WeightGen::Uniform(args.wlo, args.whi),
    };
    match args.kind.as_str() {
        "path" => {
            let n = args
                .n
                .ok_or_else(|| Error::Config("path needs --n".into()))?;
            let g = synth::path_graph(n, weights, args.seed)?;
            io::save_weighted_edge_list(&g, &args.out)?;
        }
        "grid" => {
            let rows = args
                .rows
                .ok_or_else(|| Error::Config("grid needs --rows".into()))?;
            let cols = args
                .cols
                .ok_or_else(|| Error::Config("grid needs --cols".into()))?;
            let (g, coords) = synth::grid_graph(rows, cols, weights, args.seed)?;
            io::save_weighted_edge_list(&g, &args.out)?;
            let cpath = args
                .coords_out
                .unwrap_or_else(|| args.out.with_extension("coords"));
            io::save_coords(&coords, &cpath)?;
        }
        "uniform_random" => {
            let n = args
                .n
                .ok_or_else(|| Error::Config("uniform_random needs --n".into()))?;
            let m = args
                .m
                .ok_or_else(|| Error::Config("uniform_random needs --m".into()))?;
            let g = synth::uniform_random_graph(n, m, args.wlo, args.whi, args.seed, false, false)?;
            io::save_weighted_edge_list(&g, &args.out)?;
        }
        other => return Err(Error::Config(format!("unknown graph kind '{other}'"))),
    }
    println!("wrote {}", args.out.display());
    Ok(0)
}

fn cmd_tune(args: TuneArgs) -> Result<u8> {
    let algo = AlgoKind::from_str(&args.inst.algo)?;
    let loaded = args.inst.load(true)?;
    let inst = args.inst.instance(&loaded)?;
    let rt = Runtime::new(args.inst.threads)?;
    let rep = tune::tune(algo, &inst, args.budget as usize, args.tune_seed, &rt)?;

    let best = rep.best_schedule();
    println!(
        "best schedule: {} delta={} threshold={} buckets={} {} ({:.3} ms median over {} trials)",
        best.update_strategy,
        best.delta,
        best.fusion_threshold,
        best.num_open_buckets,
        best.direction,
        rep.best_median_ms(),
        rep.trials.len()
    );
    let json = serde_json::json!({
        "algo": rep.algorithm,
        "graph": args.inst.graph.display().to_string(),
        "trials": rep.trials.iter().map(|t| serde_json::json!({
            "schedule": t.schedule,
            "ms": t.median_ms,
            "valid": t.valid,
        })).collect::<Vec<_>>(),
        "best": rep.best,
    });
    let text = serde_json::to_string_pretty(&json).expect("tune report serialization");
    match &args.report {
        Some(path) => io::write_text(path, &text)?,
        None => println!("{text}"),
    }
    Ok(0)
}

fn cmd_bench(args: BenchArgs) -> Result<u8> {
    let algo = AlgoKind::from_str(&args.inst.algo)?;
    let rt = Runtime::new(args.inst.threads)?;
    let strategies: Vec<UpdateStrategy> = args
        .strategies
        .split(',')
        .map(|s| UpdateStrategy::from_str(s.trim()))
        .collect::<Result<_>>()?;

    let mut graph_paths = vec![args.inst.graph.clone()];
    graph_paths.extend(args.more_graphs.iter().cloned());

    println!(
        "{:<24} {}",
        "graph",
        strategies
            .iter()
            .map(|s| format!("{:<28}", s.name()))
            .collect::<String>()
    );
    for path in &graph_paths {
        let mut inst_args = args.inst.clone();
        inst_args.graph = path.clone();
        let base = args.sched.build(algo)?;
        let loaded = inst_args.load(base.direction == TraversalDirection::DensePull)?;
        let inst = inst_args.instance(&loaded)?;
        let mut row = format!(
            "{:<24}",
            path.file_name()
                .map(|f| f.to_string_lossy().into_owned())
                .unwrap_or_default()
        );
        for &strat in &strategies {
            let sched = Schedule {
                update_strategy: strat,
                ..base.clone()
            };
            if validate_schedule(algo, &sched, loaded.graph.has_in_edges()).is_err() {
                row.push_str(&format!("{:<28}", "--"));
                continue;
            }
            let mut times = Vec::new();
            let mut rounds = 0;
            for _ in 0..args.runs.max(1) {
                let out = algorithms::run_algorithm(algo, &inst, &sched, &rt)?;
                rounds = out.stats.rounds;
                times.push(out.stats.time_ms);
            }
            times.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let cell = format!("{:.2} ms [{} rounds]", times[times.len() / 2], rounds);
            row.push_str(&format!("{cell:<28}"));
        }
        println!("{row}");
    }
    Ok(0)
}
