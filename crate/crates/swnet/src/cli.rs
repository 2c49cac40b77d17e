//! Command-line entry point.
//!
//! One binary with subcommands for graph generation (`gen-lattice`,
//! `construct`), measurement (`measure`, `smallworld`) and the three
//! experiments (`exp1`, `exp2`, `exp3`). Exit codes are stable for
//! scripting: 0 on success, 1 on runtime or validation failures, 2 on usage
//! errors. Every file-writing run drops a JSON config sidecar next to its
//! outputs with everything needed to reproduce them.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::bypass::{best_worst_pairs, PlacementSelection};
use crate::construction::{build_lattice, relocate_sweep, ConstructionParams, LatticeSpec};
use crate::defaults;
use crate::harness::{
    run_experiment1, run_experiment2, run_experiment3, ConfigSnapshot, Exp1Params,
    ExperimentSeries, ScenarioParams, SweepKey, RNG_ALGORITHM,
};
use crate::io::{read_graph, write_graph_string};
use crate::metrics::{
    characteristic_path_length_with, clustering_coefficient_with, gamma_random, l_random,
    ClusteringMode, PathLengthMode,
};
use crate::svg::{line_chart, Series};

#[derive(Parser)]
#[command(
    name = "swnet",
    version,
    about = "Ad hoc network topologies, bypass links and small-world metrics",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a regular square lattice in the graph text format
    GenLattice(GenLatticeArgs),
    /// Grow an ad hoc topology from a lattice by probabilistic relocation
    Construct(ConstructArgs),
    /// Print n, k, gamma, L and the random baselines for a graph file
    Measure(MeasureArgs),
    /// Evaluate the small-world verdict for a graph file
    Smallworld(SmallworldArgs),
    /// Probability sweep: L and gamma vs relocation probability
    Exp1(Exp1Args),
    /// Single reassigned bypass link between two partitions
    Exp2(Exp2Args),
    /// Growing number of bypass links between two partitions
    Exp3(Exp3Args),
}

fn parse_probability(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() && (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("probability must lie in [0, 1], got {s}"))
    }
}

fn parse_positive_real(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("value must be positive, got {s}"))
    }
}

fn parse_positive_count(s: &str) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|_| format!("`{s}` is not an integer"))?;
    if v >= 1 {
        Ok(v)
    } else {
        Err("value must be at least 1".into())
    }
}

fn parse_l_mode(s: &str) -> Result<PathLengthMode, String> {
    PathLengthMode::parse(s)
        .ok_or_else(|| format!("`{s}` is not a path length mode (per-node-mean, pairwise-median)"))
}

fn parse_verdict_alpha(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() && v > 1.0 {
        Ok(v)
    } else {
        Err(format!("alpha must exceed 1, got {s}"))
    }
}

fn parse_verdict_beta(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() && v >= 1.0 {
        Ok(v)
    } else {
        Err(format!("beta must be at least 1, got {s}"))
    }
}

#[derive(Args)]
struct SweepLatticeOpts {
    /// Lattice rows
    #[arg(long, default_value_t = defaults::LATTICE_ROWS, value_parser = parse_positive_count)]
    rows: usize,
    /// Lattice columns
    #[arg(long, default_value_t = defaults::LATTICE_COLS, value_parser = parse_positive_count)]
    cols: usize,
    /// Lattice spacing in spatial units
    #[arg(long, default_value_t = defaults::LATTICE_SPACING, value_parser = parse_positive_real)]
    spacing: f64,
    /// Transmission range in spatial units
    #[arg(long, default_value_t = defaults::TRANSMISSION_RANGE, value_parser = parse_positive_real)]
    tr: f64,
}

#[derive(Args)]
struct PartitionOpts {
    /// Lattice rows per partition
    #[arg(long, default_value_t = defaults::PARTITION_ROWS, value_parser = parse_positive_count)]
    rows: usize,
    /// Lattice columns per partition
    #[arg(long, default_value_t = defaults::PARTITION_COLS, value_parser = parse_positive_count)]
    cols: usize,
    /// Lattice spacing in spatial units
    #[arg(long, default_value_t = defaults::PARTITION_SPACING, value_parser = parse_positive_real)]
    spacing: f64,
    /// Transmission range in spatial units
    #[arg(long, default_value_t = defaults::TRANSMISSION_RANGE, value_parser = parse_positive_real)]
    tr: f64,
    /// Horizontal gap between the partition bounding boxes
    #[arg(long, default_value_t = defaults::PARTITION_GAP, value_parser = parse_positive_real)]
    gap: f64,
}

#[derive(Args)]
struct GenLatticeArgs {
    #[command(flatten)]
    lattice: SweepLatticeOpts,
    /// Output file (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(flatten)]
    lattice: SweepLatticeOpts,
    /// Relocation probability
    #[arg(long, default_value_t = 1.0, value_parser = parse_probability)]
    p: f64,
    /// Master seed
    #[arg(long, default_value_t = defaults::MASTER_SEED)]
    seed: u64,
    /// Output file (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MeasureArgs {
    /// Graph file in the text format
    graph: PathBuf,
    /// Median mode behind the characteristic path length
    #[arg(long = "l-mode", value_parser = parse_l_mode, default_value = "per-node-mean")]
    l_mode: PathLengthMode,
    /// Leave nodes of degree <= 1 out of the clustering average
    #[arg(long)]
    exclude_low_degree: bool,
    /// Clustering dominance factor of the verdict
    #[arg(long, default_value_t = defaults::VERDICT_ALPHA, value_parser = parse_verdict_alpha)]
    alpha: f64,
    /// Path length slack factor of the verdict
    #[arg(long, default_value_t = defaults::VERDICT_BETA, value_parser = parse_verdict_beta)]
    beta: f64,
}

#[derive(Args)]
struct SmallworldArgs {
    /// Graph file in the text format
    graph: PathBuf,
    #[arg(long = "l-mode", value_parser = parse_l_mode, default_value = "per-node-mean")]
    l_mode: PathLengthMode,
    #[arg(long, default_value_t = defaults::VERDICT_ALPHA, value_parser = parse_verdict_alpha)]
    alpha: f64,
    #[arg(long, default_value_t = defaults::VERDICT_BETA, value_parser = parse_verdict_beta)]
    beta: f64,
}

#[derive(Args)]
struct Exp1Args {
    #[command(flatten)]
    lattice: SweepLatticeOpts,
    /// Evenly spaced probability steps over [0, 1]
    #[arg(long = "p-steps", default_value_t = defaults::P_STEPS, value_parser = parse_positive_count)]
    p_steps: usize,
    /// Runs averaged per probability step
    #[arg(long, default_value_t = defaults::SWEEP_RUNS, value_parser = parse_positive_count)]
    runs: usize,
    /// Master seed
    #[arg(long, default_value_t = defaults::MASTER_SEED)]
    seed: u64,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Also write an SVG chart of the aggregate series
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct Exp2Args {
    #[command(flatten)]
    partitions: PartitionOpts,
    /// Single-link placements to sample
    #[arg(long, default_value_t = defaults::TRIALS, value_parser = parse_positive_count)]
    trials: usize,
    /// Master seed
    #[arg(long, default_value_t = defaults::MASTER_SEED)]
    seed: u64,
    /// Also evaluate every cross pair and report the best and worst one
    #[arg(long)]
    exhaustive: bool,
    /// Explicit normalization reference for L (default: max over the trials)
    #[arg(long = "l-ref", value_parser = parse_positive_real)]
    l_ref: Option<f64>,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Also write an SVG chart of the trial series
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct Exp3Args {
    #[command(flatten)]
    partitions: PartitionOpts,
    /// Number of bypass links to grow to
    #[arg(long = "b-max", default_value_t = defaults::B_MAX, value_parser = parse_positive_count)]
    b_max: usize,
    /// Master seed
    #[arg(long, default_value_t = defaults::MASTER_SEED)]
    seed: u64,
    /// Explicit normalization reference for L (default: max over the run)
    #[arg(long = "l-ref", value_parser = parse_positive_real)]
    l_ref: Option<f64>,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Also write an SVG chart of the growth series
    #[arg(long)]
    svg: Option<PathBuf>,
}

enum CmdError {
    Usage(String),
    Runtime(String),
}

impl<E: std::error::Error> From<E> for CmdError {
    fn from(e: E) -> Self {
        CmdError::Runtime(e.to_string())
    }
}

/// Effective configuration of one run, echoed as a JSON sidecar.
#[derive(Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub rng_algorithm: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<u64>,
    pub settings: serde_json::Value,
    pub outputs: Vec<String>,
}

fn write_sidecar(path: &Path, config: &RunConfig) -> Result<(), CmdError> {
    let mut text = serde_json::to_string_pretty(config)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn usage(msg: impl Into<String>) -> CmdError {
    CmdError::Usage(msg.into())
}

fn check_lattice_range(spacing: f64, tr: f64, nodes: usize) -> Result<(), CmdError> {
    if nodes > 1 && spacing > tr {
        return Err(usage(format!(
            "--spacing {spacing} exceeds --tr {tr}; the lattice seed would have no edges"
        )));
    }
    Ok(())
}

fn check_gap(gap: f64, tr: f64) -> Result<(), CmdError> {
    if gap <= tr {
        return Err(usage(format!(
            "--gap {gap} must exceed --tr {tr} so every cross link is a bypass link"
        )));
    }
    Ok(())
}

/// Parses argv and runs the selected subcommand, returning the process exit
/// code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(CmdError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CmdError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn execute(command: Command) -> Result<(), CmdError> {
    match command {
        Command::GenLattice(args) => gen_lattice(args),
        Command::Construct(args) => construct(args),
        Command::Measure(args) => measure(args),
        Command::Smallworld(args) => smallworld(args),
        Command::Exp1(args) => exp1(args),
        Command::Exp2(args) => exp2(args),
        Command::Exp3(args) => exp3(args),
    }
}

fn emit_graph(
    graph: &crate::graph::SpatialGraph,
    out: Option<&Path>,
    config: RunConfig,
) -> Result<(), CmdError> {
    let text = write_graph_string(graph);
    match out {
        Some(path) => {
            fs::write(path, &text)?;
            let sidecar = path.with_extension(format!(
                "{}config.json",
                path.extension()
                    .map(|e| format!("{}.", e.to_string_lossy()))
                    .unwrap_or_default()
            ));
            write_sidecar(&sidecar, &config)?;
            println!("wrote {}", path.display());
            println!("wrote {}", sidecar.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn gen_lattice(args: GenLatticeArgs) -> Result<(), CmdError> {
    let l = &args.lattice;
    check_lattice_range(l.spacing, l.tr, l.rows * l.cols)?;
    let spec = LatticeSpec::new(l.rows, l.cols, l.spacing)?;
    let graph = build_lattice(&spec, l.tr)?;
    let outputs = args.out.iter().map(|p| p.display().to_string()).collect();
    emit_graph(
        &graph,
        args.out.as_deref(),
        RunConfig {
            command: "gen-lattice".into(),
            rng_algorithm: RNG_ALGORITHM.into(),
            master_seed: None,
            settings: serde_json::json!({
                "rows": l.rows, "cols": l.cols, "spacing": l.spacing, "tr": l.tr,
            }),
            outputs,
        },
    )
}

fn construct(args: ConstructArgs) -> Result<(), CmdError> {
    let l = &args.lattice;
    check_lattice_range(l.spacing, l.tr, l.rows * l.cols)?;
    let spec = LatticeSpec::new(l.rows, l.cols, l.spacing)?;
    let params = ConstructionParams::for_lattice(&spec, l.tr, args.p)?;
    use rand_chacha::rand_core::SeedableRng;
    let seed = crate::harness::seed_for(args.seed, 0, 0);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let graph = relocate_sweep(build_lattice(&spec, l.tr)?, &params, &mut rng)?;
    let outputs = args.out.iter().map(|p| p.display().to_string()).collect();
    emit_graph(
        &graph,
        args.out.as_deref(),
        RunConfig {
            command: "construct".into(),
            rng_algorithm: RNG_ALGORITHM.into(),
            master_seed: Some(args.seed),
            settings: serde_json::json!({
                "rows": l.rows, "cols": l.cols, "spacing": l.spacing, "tr": l.tr,
                "p": args.p, "derived_seed": seed,
            }),
            outputs,
        },
    )
}

fn measure(args: MeasureArgs) -> Result<(), CmdError> {
    let graph = read_graph(&args.graph)?;
    let mode = if args.exclude_low_degree {
        ClusteringMode::ExcludeLowDegree
    } else {
        ClusteringMode::IncludeLowDegree
    };
    let n = graph.node_count();
    let k = graph.average_degree()?;
    let gamma = clustering_coefficient_with(&graph, mode)?;
    let l = characteristic_path_length_with(&graph, args.l_mode)?;
    let gamma_rand = gamma_random(n, k)?;
    let l_rand = l_random(n, k)?;
    let verdict = gamma >= args.alpha * gamma_rand && l <= args.beta * l_rand;
    println!("n,k,gamma,L,gamma_random,l_random,verdict");
    println!("{n},{k},{gamma},{l},{gamma_rand},{l_rand},{verdict}");
    Ok(())
}

fn smallworld(args: SmallworldArgs) -> Result<(), CmdError> {
    let graph = read_graph(&args.graph)?;
    let n = graph.node_count();
    let k = graph.average_degree()?;
    let gamma = clustering_coefficient_with(&graph, ClusteringMode::IncludeLowDegree)?;
    let l = characteristic_path_length_with(&graph, args.l_mode)?;
    let gamma_rand = gamma_random(n, k)?;
    let l_rand = l_random(n, k)?;
    let verdict = gamma >= args.alpha * gamma_rand && l <= args.beta * l_rand;
    println!("small_world,n,k,gamma,L,gamma_random,l_random,alpha,beta");
    println!(
        "{verdict},{n},{k},{gamma},{l},{gamma_rand},{l_rand},{},{}",
        args.alpha, args.beta
    );
    Ok(())
}

fn write_experiment_files(
    out_dir: &Path,
    command: &str,
    files: &[(String, String)],
    svg: Option<(&Path, String)>,
    snapshot: &ConfigSnapshot,
) -> Result<(), CmdError> {
    fs::create_dir_all(out_dir)?;
    let mut outputs = Vec::new();
    for (name, content) in files {
        let path = out_dir.join(name);
        fs::write(&path, content)?;
        println!("wrote {}", path.display());
        outputs.push(path.display().to_string());
    }
    if let Some((path, content)) = svg {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent)?;
        }
        fs::write(path, content)?;
        println!("wrote {}", path.display());
        outputs.push(path.display().to_string());
    }
    let config = RunConfig {
        command: command.into(),
        rng_algorithm: RNG_ALGORITHM.into(),
        master_seed: Some(snapshot.master_seed),
        settings: serde_json::to_value(snapshot)?,
        outputs,
    };
    let sidecar = out_dir.join("config.json");
    write_sidecar(&sidecar, &config)?;
    println!("wrote {}", sidecar.display());
    Ok(())
}

fn series_chart(series: &ExperimentSeries, title: &str, x_label: &str) -> String {
    let xs: Vec<f64> = series.rows.iter().map(|r| r.key).collect();
    match series.sweep_key {
        SweepKey::P => {
            let l: Vec<(f64, f64)> = xs
                .iter()
                .zip(&series.rows)
                .map(|(&x, r)| (x, r.record.l_norm.unwrap_or(f64::NAN)))
                .collect();
            let g: Vec<(f64, f64)> = xs
                .iter()
                .zip(&series.rows)
                .map(|(&x, r)| (x, r.gamma_norm.unwrap_or(f64::NAN)))
                .collect();
            line_chart(
                title,
                x_label,
                &[
                    Series {
                        label: "L (normalized)",
                        points: &l,
                    },
                    Series {
                        label: "gamma (normalized)",
                        points: &g,
                    },
                ],
            )
        }
        SweepKey::Trial | SweepKey::B => {
            let l: Vec<(f64, f64)> = xs
                .iter()
                .zip(&series.rows)
                .map(|(&x, r)| (x, r.record.l_norm.unwrap_or(f64::NAN)))
                .collect();
            let g: Vec<(f64, f64)> = xs
                .iter()
                .zip(&series.rows)
                .map(|(&x, r)| (x, r.record.gamma))
                .collect();
            line_chart(
                title,
                x_label,
                &[
                    Series {
                        label: "L (normalized)",
                        points: &l,
                    },
                    Series {
                        label: "gamma",
                        points: &g,
                    },
                ],
            )
        }
    }
}

fn exp1(args: Exp1Args) -> Result<(), CmdError> {
    let l = &args.lattice;
    check_lattice_range(l.spacing, l.tr, l.rows * l.cols)?;
    if args.p_steps < 2 {
        return Err(usage("--p-steps must be at least 2 to span [0, 1]"));
    }
    let params = Exp1Params {
        spec: LatticeSpec::new(l.rows, l.cols, l.spacing)?,
        tr: l.tr,
        p_values: crate::harness::even_p_values(args.p_steps),
        runs: args.runs,
    };
    let result = run_experiment1(&params, args.seed)?;
    let svg = args
        .svg
        .as_deref()
        .map(|p| (p, series_chart(&result.series, "probability sweep", "p")));
    write_experiment_files(
        &args.out,
        "exp1",
        &[
            ("exp1_runs.csv".into(), result.runs_csv()),
            ("exp1_aggregate.csv".into(), result.aggregate_csv()),
        ],
        svg,
        &result.series.config,
    )
}

fn exp2(args: Exp2Args) -> Result<(), CmdError> {
    let p = &args.partitions;
    check_lattice_range(p.spacing, p.tr, p.rows * p.cols)?;
    check_gap(p.gap, p.tr)?;
    let params = ScenarioParams {
        spec: LatticeSpec::new(p.rows, p.cols, p.spacing)?,
        tr: p.tr,
        gap: p.gap,
    };
    let series = run_experiment2(&params, args.trials, args.seed, args.l_ref)?;
    let mut files = vec![("exp2_trials.csv".into(), series.to_csv())];
    if args.exhaustive {
        let scenario = params.build(args.seed)?;
        let extremes = best_worst_pairs(&scenario, PlacementSelection::Exhaustive)?;
        let csv = format!(
            "which,u,v,L\nbest,{},{},{}\nworst,{},{},{}\n",
            extremes.best.u,
            extremes.best.v,
            extremes.best.l,
            extremes.worst.u,
            extremes.worst.v,
            extremes.worst.l,
        );
        println!(
            "best pair ({}, {}) L={}  worst pair ({}, {}) L={}",
            extremes.best.u,
            extremes.best.v,
            extremes.best.l,
            extremes.worst.u,
            extremes.worst.v,
            extremes.worst.l,
        );
        files.push(("exp2_best_worst.csv".into(), csv));
    }
    let svg = args
        .svg
        .as_deref()
        .map(|p| (p, series_chart(&series, "single bypass link", "trial")));
    write_experiment_files(&args.out, "exp2", &files, svg, &series.config)
}

fn exp3(args: Exp3Args) -> Result<(), CmdError> {
    let p = &args.partitions;
    check_lattice_range(p.spacing, p.tr, p.rows * p.cols)?;
    check_gap(p.gap, p.tr)?;
    if args.b_max > p.rows * p.cols * p.rows * p.cols {
        return Err(usage(format!(
            "--b-max {} exceeds the {} distinct cross pairs of the scenario",
            args.b_max,
            p.rows * p.cols * p.rows * p.cols
        )));
    }
    let params = ScenarioParams {
        spec: LatticeSpec::new(p.rows, p.cols, p.spacing)?,
        tr: p.tr,
        gap: p.gap,
    };
    let series = run_experiment3(&params, args.b_max, args.seed, args.l_ref)?;
    let svg = args
        .svg
        .as_deref()
        .map(|p| (p, series_chart(&series, "bypass link growth", "b")));
    write_experiment_files(
        &args.out,
        "exp3",
        &[("exp3_growth.csv".into(), series.to_csv())],
        svg,
        &series.config,
    )
}
