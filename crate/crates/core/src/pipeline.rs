//! Boundary discovery followed by one of the learners, with separate
//! counters for the two phases.

use crate::ci::{CiStats, CiTest, CountingTester, FisherZTester, GaussianDataset, OracleTester};
use crate::graph::Dag;
use crate::mb::{compute_mb, MbMap};
use crate::rsl::{learn_auto, rsl_learn, Attempt, LearnError, LearnOptions, LearnResult, SideInfo};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    DiamondFree,
    BoundedClique(usize),
    Auto,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::DiamondFree => "rsl-d",
            Algorithm::BoundedClique(_) => "rsl-omega",
            Algorithm::Auto => "rsl-auto",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub result: LearnResult,
    pub initial_mbs: MbMap,
    pub mb_stats: CiStats,
    /// Learning-phase tests; summed over attempts in automatic mode.
    pub learn_stats: CiStats,
    pub m_used: Option<usize>,
    pub attempts: Vec<Attempt>,
}

/// Significance level for boundary discovery when none is given: `2 / n²`.
pub fn default_mb_alpha(n: usize) -> f64 {
    let n = n.max(2) as f64;
    (2.0 / (n * n)).min(0.5)
}

pub fn run<M: CiTest, L: CiTest>(
    mb_tester: M,
    learn_tester: L,
    algorithm: Algorithm,
    opts: &LearnOptions,
) -> Result<RunOutput, LearnError> {
    let n = mb_tester.n_vars();
    let mut mb_counter = CountingTester::new(mb_tester);
    let mbs = compute_mb(&mut mb_counter, n)?;
    let mut counter = CountingTester::new(learn_tester);
    let (result, m_used, attempts) = match algorithm {
        Algorithm::DiamondFree => (
            rsl_learn(&mut counter, mbs.clone(), SideInfo::DiamondFree, opts)?,
            None,
            Vec::new(),
        ),
        Algorithm::BoundedClique(m) => (
            rsl_learn(&mut counter, mbs.clone(), SideInfo::BoundedClique(m), opts)?,
            Some(m),
            Vec::new(),
        ),
        Algorithm::Auto => {
            let auto = learn_auto(&mut counter, &mbs, opts)?;
            (auto.result, Some(auto.m_used), auto.attempts)
        }
    };
    Ok(RunOutput {
        result,
        initial_mbs: mbs,
        mb_stats: mb_counter.stats(),
        learn_stats: counter.stats(),
        m_used,
        attempts,
    })
}

pub fn run_oracle(
    dag: &Dag,
    algorithm: Algorithm,
    opts: &LearnOptions,
) -> Result<RunOutput, LearnError> {
    run(
        OracleTester::new(dag),
        OracleTester::new(dag),
        algorithm,
        opts,
    )
}

pub fn run_fisher_z(
    data: &GaussianDataset,
    alpha: f64,
    mb_alpha: Option<f64>,
    algorithm: Algorithm,
    opts: &LearnOptions,
) -> Result<RunOutput, LearnError> {
    let mb_alpha = mb_alpha.unwrap_or_else(|| default_mb_alpha(data.n_vars()));
    let mb_tester = FisherZTester::new(data, mb_alpha)?;
    let tester = FisherZTester::new(data, alpha)?;
    run(mb_tester, tester, algorithm, opts)
}
