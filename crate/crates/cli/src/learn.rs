use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};
use rsl_core::io::{ResultFile, RESULT_SCHEMA};
use rsl_core::pipeline::{default_mb_alpha, run_fisher_z, run_oracle, Algorithm, RunOutput};
use rsl_core::rsl::{LearnOptions, TieBreak};

use crate::error::CliError;
use crate::files::{read_csv, read_graph, Output};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgName {
    #[value(name = "rsl-d")]
    RslD,
    #[value(name = "rsl-omega")]
    RslOmega,
    #[value(name = "rsl-auto")]
    RslAuto,
}

impl AlgName {
    pub fn resolve(self, m: Option<usize>) -> Result<Algorithm, CliError> {
        match (self, m) {
            (AlgName::RslD, None) => Ok(Algorithm::DiamondFree),
            (AlgName::RslAuto, None) => Ok(Algorithm::Auto),
            (AlgName::RslOmega, Some(0)) => Err(CliError::Usage("--m must be at least 1".into())),
            (AlgName::RslOmega, Some(m)) => Ok(Algorithm::BoundedClique(m)),
            (AlgName::RslOmega, None) => Err(CliError::Usage("rsl-omega needs --m".into())),
            (_, Some(_)) => Err(CliError::Usage("--m only applies to rsl-omega".into())),
        }
    }
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["oracle", "data"])))]
pub struct LearnArgs {
    #[arg(long, value_enum)]
    alg: AlgName,
    /// Clique-number bound for rsl-omega.
    #[arg(long)]
    m: Option<usize>,
    /// Answer CI queries by d-separation in this graph.
    #[arg(long)]
    oracle: Option<PathBuf>,
    /// Answer CI queries with Fisher-Z tests on this CSV dataset.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Significance level of the learning-phase tests.
    #[arg(long, default_value_t = 0.01)]
    alpha: f64,
    /// Significance level of Markov boundary discovery (default 2/n²).
    #[arg(long)]
    mb_alpha: Option<f64>,
    /// Seed for tie-breaking among equal boundary sizes; index order if unset.
    #[arg(long, env = "RSL_SEED")]
    seed: Option<u64>,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

pub fn check_alpha(name: &str, alpha: f64) -> Result<(), CliError> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{name} {alpha} outside (0, 1)")))
    }
}

pub fn options(seed: Option<u64>) -> LearnOptions {
    LearnOptions {
        tie_break: seed.map_or(TieBreak::Index, TieBreak::Seeded),
    }
}

pub struct Provenance {
    pub algorithm: Algorithm,
    pub mode: &'static str,
    pub names: Option<Vec<String>>,
    pub alpha: Option<f64>,
    pub mb_alpha: Option<f64>,
    pub seed: Option<u64>,
}

pub fn result_file(out: &RunOutput, prov: Provenance, wall_time_secs: f64) -> ResultFile {
    let r = &out.result;
    ResultFile {
        schema: RESULT_SCHEMA,
        algorithm: prov.algorithm.name().to_string(),
        mode: prov.mode.to_string(),
        n: r.skeleton.n(),
        names: prov.names,
        edges: r.skeleton.edges().collect(),
        sepsets: ResultFile::sepset_entries(&r.sepsets),
        removal_order: r.removal_order.clone(),
        stats: out.learn_stats.into(),
        mb_stats: out.mb_stats.into(),
        wall_time_secs,
        fallback_used: r.fallback_used,
        m_used: out.m_used,
        alpha: prov.alpha,
        mb_alpha: prov.mb_alpha,
        seed: prov.seed,
    }
}

pub fn run(args: LearnArgs) -> Result<(), CliError> {
    let algorithm = args.alg.resolve(args.m)?;
    check_alpha("--alpha", args.alpha)?;
    if let Some(a) = args.mb_alpha {
        check_alpha("--mb-alpha", a)?;
    }
    let opts = options(args.seed);
    let start = Instant::now();
    let (out, prov) = match (&args.oracle, &args.data) {
        (Some(path), None) => {
            let graph = read_graph(path)?;
            let out = run_oracle(&graph.dag, algorithm, &opts)?;
            let prov = Provenance {
                algorithm,
                mode: "oracle",
                names: graph.names,
                alpha: None,
                mb_alpha: None,
                seed: args.seed,
            };
            (out, prov)
        }
        (None, Some(path)) => {
            let (names, data) = read_csv(path)?;
            let mb_alpha = args
                .mb_alpha
                .unwrap_or_else(|| default_mb_alpha(data.n_vars()));
            let out = run_fisher_z(&data, args.alpha, Some(mb_alpha), algorithm, &opts)?;
            let prov = Provenance {
                algorithm,
                mode: "fisher-z",
                names: Some(names),
                alpha: Some(args.alpha),
                mb_alpha: Some(mb_alpha),
                seed: args.seed,
            };
            (out, prov)
        }
        _ => {
            return Err(CliError::Usage(
                "give exactly one of --oracle and --data".into(),
            ))
        }
    };
    let file = result_file(&out, prov, start.elapsed().as_secs_f64());
    Output::open(args.out.as_deref())?.write_json(&file)
}
