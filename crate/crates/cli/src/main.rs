//! `rsl`: generate graphs and data, learn skeletons, score them, and run
//! benchmark sweeps.

mod bench;
mod error;
mod files;
mod learn;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rsl_core::eval::{score_sepsets, score_skeleton};
use rsl_core::fixtures;
use rsl_core::io::{write_dataset, write_graph, GraphFile, ResultFile};
use rsl_core::synth::{draw_sem, erdos_renyi_dag, sample_sem};
use rsl_core::Skeleton;
use serde::Serialize;

use crate::error::CliError;
use crate::files::{read_graph, read_json, Output};

#[derive(Parser)]
#[command(
    name = "rsl",
    version,
    about = "Recursive skeleton learning for Bayesian networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random DAG or a bundled graph as an edge list.
    Generate(GenerateArgs),
    /// Draw a linear-Gaussian model for a graph and sample a CSV dataset.
    Sample(SampleArgs),
    /// Learn a skeleton from an oracle graph or a dataset.
    Learn(learn::LearnArgs),
    /// Score a learned result against the true graph.
    Evaluate(EvaluateArgs),
    /// Sweep graph sizes and algorithms, one CSV row per run.
    Bench(bench::BenchArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Number of vertices.
    #[arg(long, required_unless_present = "fixture")]
    n: Option<usize>,
    /// Edge probability.
    #[arg(long, conflicts_with_all = ["exponent", "fixture"])]
    p: Option<f64>,
    /// Edge probability `n^-e`.
    #[arg(long, conflicts_with = "fixture")]
    exponent: Option<f64>,
    /// Bundled graph name.
    #[arg(long, value_enum, conflicts_with = "n")]
    fixture: Option<Fixture>,
    #[arg(long, env = "RSL_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Fixture {
    Diabetes,
    Chain3,
    Collider3,
    Diamond,
}

impl Fixture {
    pub fn load(self) -> GraphFile {
        let name = match self {
            Fixture::Diabetes => "diabetes",
            Fixture::Chain3 => "chain3",
            Fixture::Collider3 => "collider3",
            Fixture::Diamond => "diamond",
        };
        fixtures::named(name).expect("bundled fixture")
    }
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    samples: usize,
    #[arg(long, env = "RSL_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    /// True graph.
    #[arg(long)]
    truth: PathBuf,
    /// JSON written by `learn`.
    #[arg(long)]
    result: PathBuf,
    /// JSON report destination (default stdout).
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Also write the report as a CSV header plus one row.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct EvaluationReport {
    schema: u32,
    algorithm: String,
    mode: String,
    n: usize,
    f1: f64,
    precision: f64,
    recall: f64,
    shd: usize,
    extra_edges: usize,
    missing_edges: usize,
    sepsets: usize,
    sepset_mistakes: usize,
    alss: f64,
    ci_tests: u64,
    asc: f64,
}

pub fn probability(n: usize, p: Option<f64>, exponent: Option<f64>) -> Result<f64, CliError> {
    let p = match (p, exponent) {
        (Some(p), _) => p,
        (None, Some(e)) => (n.max(1) as f64).powf(-e),
        (None, None) => return Err(CliError::Usage("give --p or --exponent".into())),
    };
    if !(0.0..=1.0).contains(&p) {
        return Err(CliError::Usage(format!(
            "edge probability {p} outside [0, 1]"
        )));
    }
    Ok(p)
}

fn generate(args: GenerateArgs) -> Result<(), CliError> {
    let graph = match (args.fixture, args.n) {
        (Some(f), _) => f.load(),
        (None, Some(n)) => {
            let p = probability(n, args.p, args.exponent)?;
            GraphFile::unnamed(erdos_renyi_dag(n, p, args.seed).expect("validated probability"))
        }
        (None, None) => return Err(CliError::Usage("give --n or --fixture".into())),
    };
    Output::open(args.out.as_deref())?.write_str(&write_graph(&graph))
}

fn sample(args: SampleArgs) -> Result<(), CliError> {
    if args.samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    let graph = read_graph(&args.graph)?;
    let model = draw_sem(&graph.dag, args.seed);
    let data = sample_sem(&model, args.samples, args.seed).expect("positive sample count");
    let mut out = Output::open(args.out.as_deref())?;
    let names = graph.vertex_names();
    write_dataset(out.writer(), &names, &data).map_err(|e| match e {
        rsl_core::io::IoError::Io(e) => out.io_error(e),
        rsl_core::io::IoError::Csv(e) => out.io_error(e.into()),
        other => CliError::Usage(other.to_string()),
    })
}

fn evaluate(args: EvaluateArgs) -> Result<(), CliError> {
    let truth = read_graph(&args.truth)?;
    let result: ResultFile = read_json(&args.result)?;
    if result.n != truth.dag.n() {
        return Err(CliError::Mismatch(format!(
            "result has {} vertices, truth has {}",
            result.n,
            truth.dag.n()
        )));
    }
    let learned = Skeleton::from_pairs(result.n, result.edges.iter().copied())
        .map_err(|e| CliError::Mismatch(format!("{}: {e}", args.result.display())))?;
    let sk = score_skeleton(&truth.dag.skeleton(), &learned)
        .map_err(|e| CliError::Mismatch(e.to_string()))?;
    let ss = score_sepsets(&truth.dag, &result.sepset_map());
    let report = EvaluationReport {
        schema: rsl_core::io::RESULT_SCHEMA,
        algorithm: result.algorithm.clone(),
        mode: result.mode.clone(),
        n: result.n,
        f1: sk.f1,
        precision: sk.precision,
        recall: sk.recall,
        shd: sk.shd,
        extra_edges: sk.extra_edges,
        missing_edges: sk.missing_edges,
        sepsets: ss.total,
        sepset_mistakes: ss.mistakes,
        alss: ss.alss(),
        ci_tests: result.stats.total_tests,
        asc: result.stats.asc,
    };
    Output::open(args.out.as_deref())?.write_json(&report)?;
    if let Some(path) = &args.csv {
        let mut out = Output::open(Some(path))?;
        let mut w = csv::Writer::from_writer(out.writer());
        w.serialize(&report)
            .and_then(|_| w.flush().map_err(Into::into))
            .map_err(|e| CliError::io(path, e.into()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Sample(a) => sample(a),
        Command::Learn(a) => learn::run(a),
        Command::Evaluate(a) => evaluate(a),
        Command::Bench(a) => bench::run(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rsl: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
