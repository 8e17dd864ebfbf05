//! Benchmark sweeps. Each `(n, repetition)` pair draws one graph (and one
//! dataset unless running on the oracle) from a seed derived from the base
//! seed, then runs every requested algorithm on it. Pairs run in parallel,
//! each with its own testers; rows are written in `(n, rep, algorithm)`
//! order once all runs finish.

use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::Args;
use rayon::prelude::*;
use rsl_core::eval::{score_sepsets, score_skeleton};
use rsl_core::pipeline::{run_fisher_z, run_oracle, Algorithm};
use rsl_core::synth::{draw_sem, erdos_renyi_dag, sample_sem};
use rsl_core::Dag;
use serde::Serialize;

use crate::error::CliError;
use crate::files::Output;
use crate::learn::{check_alpha, options, AlgName};
use crate::{probability, Fixture};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Samples {
    Oracle,
    Absolute(usize),
    PerVertex(usize),
}

impl Samples {
    fn count(self, n: usize) -> Option<usize> {
        match self {
            Samples::Oracle => None,
            Samples::Absolute(k) => Some(k),
            Samples::PerVertex(k) => Some(k * n),
        }
    }
}

impl FromStr for Samples {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("`{s}`: expected `oracle`, a count, or a multiple like `50n`");
        let parsed = if s == "oracle" {
            Samples::Oracle
        } else if let Some(k) = s.strip_suffix('n') {
            Samples::PerVertex(k.parse().map_err(|_| bad())?)
        } else {
            Samples::Absolute(s.parse().map_err(|_| bad())?)
        };
        match parsed {
            Samples::Absolute(0) | Samples::PerVertex(0) => Err(bad()),
            p => Ok(p),
        }
    }
}

#[derive(Args)]
pub struct BenchArgs {
    /// Graph sizes for random graphs.
    #[arg(long, value_delimiter = ',', required_unless_present = "fixture")]
    n: Vec<usize>,
    /// Use a bundled graph for every repetition instead of random graphs.
    #[arg(long, value_enum, conflicts_with = "n")]
    fixture: Option<Fixture>,
    /// Edge probability `n^-e`.
    #[arg(long, default_value_t = 0.82)]
    exponent: f64,
    /// Fixed edge probability, overriding --exponent.
    #[arg(long)]
    p: Option<f64>,
    /// `oracle`, an absolute count, or a multiple of n such as `50n`.
    #[arg(long, default_value = "oracle")]
    samples: Samples,
    #[arg(long, default_value_t = 10)]
    reps: usize,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "rsl-d")]
    alg: Vec<AlgName>,
    /// Clique bound for rsl-omega; defaults to the true graph's clique number.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 0.01)]
    alpha: f64,
    /// Defaults to 2/n².
    #[arg(long)]
    mb_alpha: Option<f64>,
    #[arg(long, env = "RSL_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

/// One CSV row.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub n: usize,
    pub p: f64,
    pub rep: usize,
    pub seed: u64,
    pub algorithm: &'static str,
    pub m: Option<usize>,
    pub mode: &'static str,
    pub samples: Option<usize>,
    pub diamond_free: bool,
    pub status: String,
    pub mb_tests: Option<u64>,
    pub ci_tests: Option<u64>,
    pub asc: Option<f64>,
    pub runtime_secs: Option<f64>,
    pub f1: Option<f64>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub shd: Option<usize>,
    pub alss: Option<f64>,
}

/// Seed of repetition `rep` at size `n`.
pub fn derive_seed(base: u64, n: usize, rep: usize) -> u64 {
    base.wrapping_add((n as u64) << 32).wrapping_add(rep as u64)
}

struct Job {
    n: usize,
    p: f64,
    rep: usize,
    seed: u64,
}

pub fn run(args: BenchArgs) -> Result<(), CliError> {
    if args.reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }
    check_alpha("--alpha", args.alpha)?;
    if let Some(a) = args.mb_alpha {
        check_alpha("--mb-alpha", a)?;
    }
    if args.m.is_some() && !args.alg.contains(&AlgName::RslOmega) {
        return Err(CliError::Usage("--m only applies to rsl-omega".into()));
    }
    if args.m == Some(0) {
        return Err(CliError::Usage("--m must be at least 1".into()));
    }
    let fixture = args.fixture.map(Fixture::load);
    let sizes = match &fixture {
        Some(g) => vec![g.dag.n()],
        None => args.n.clone(),
    };
    let mut jobs = Vec::new();
    for &n in &sizes {
        let p = match &fixture {
            Some(g) => {
                let pairs = n * n.saturating_sub(1) / 2;
                g.dag.edge_count() as f64 / pairs.max(1) as f64
            }
            None => probability(n, args.p, Some(args.exponent))?,
        };
        for rep in 0..args.reps {
            jobs.push(Job {
                n,
                p,
                rep,
                seed: derive_seed(args.seed, n, rep),
            });
        }
    }

    let work = || -> Vec<Row> {
        jobs.par_iter()
            .flat_map_iter(|job| {
                let dag = match &fixture {
                    Some(g) => g.dag.clone(),
                    None => erdos_renyi_dag(job.n, job.p, job.seed).expect("validated probability"),
                };
                run_job(&args, job, &dag)
            })
            .collect()
    };
    let rows = match args.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?
            .install(work),
        None => work(),
    };

    let mut out = Output::open(args.out.as_deref())?;
    let mut w = csv::Writer::from_writer(out.writer());
    for row in &rows {
        w.serialize(row)
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let flushed = w.flush();
    drop(w);
    flushed.map_err(|e| out.io_error(e))
}

fn run_job(args: &BenchArgs, job: &Job, dag: &Dag) -> Vec<Row> {
    let samples = args.samples.count(job.n);
    let data =
        samples.map(|k| sample_sem(&draw_sem(dag, job.seed), k, job.seed).expect("positive count"));
    let truth = dag.skeleton();
    let diamond_free = truth.is_diamond_free();
    let opts = options(Some(job.seed));
    args.alg
        .iter()
        .map(|&name| {
            let algorithm = match name {
                AlgName::RslD => Algorithm::DiamondFree,
                AlgName::RslAuto => Algorithm::Auto,
                AlgName::RslOmega => {
                    Algorithm::BoundedClique(args.m.unwrap_or_else(|| truth.clique_number().max(1)))
                }
            };
            let mut row = Row {
                n: job.n,
                p: job.p,
                rep: job.rep,
                seed: job.seed,
                algorithm: algorithm.name(),
                m: match algorithm {
                    Algorithm::BoundedClique(m) => Some(m),
                    _ => None,
                },
                mode: if data.is_some() { "fisher-z" } else { "oracle" },
                samples,
                diamond_free,
                status: "ok".into(),
                mb_tests: None,
                ci_tests: None,
                asc: None,
                runtime_secs: None,
                f1: None,
                precision: None,
                recall: None,
                shd: None,
                alss: None,
            };
            let start = Instant::now();
            let outcome = match &data {
                Some(d) => run_fisher_z(d, args.alpha, args.mb_alpha, algorithm, &opts),
                None => run_oracle(dag, algorithm, &opts),
            };
            row.runtime_secs = Some(start.elapsed().as_secs_f64());
            match outcome {
                Ok(out) => {
                    let sk = score_skeleton(&truth, &out.result.skeleton).expect("same size");
                    row.m = out.m_used.or(row.m);
                    row.mb_tests = Some(out.mb_stats.total_tests);
                    row.ci_tests = Some(out.learn_stats.total_tests);
                    row.asc = Some(out.learn_stats.asc());
                    row.f1 = Some(sk.f1);
                    row.precision = Some(sk.precision);
                    row.recall = Some(sk.recall);
                    row.shd = Some(sk.shd);
                    row.alss = Some(score_sepsets(dag, &out.result.sepsets).alss());
                }
                Err(e) => row.status = e.to_string(),
            }
            row
        })
        .collect()
}
