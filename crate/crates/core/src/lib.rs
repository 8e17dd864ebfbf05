//! Skeleton learning for Bayesian networks by recursive removal of
//! removable vertices, using either a clique-number bound or a
//! diamond-freeness assumption as side information.
//!
//! The usual flow is [`mb::compute_mb`] to get Markov boundaries, then
//! [`rsl::rsl_learn`] or [`rsl::learn_auto`]; [`pipeline`] wires the two
//! together for an oracle or for Gaussian data.

pub mod ci;
pub mod eval;
pub mod fixtures;
pub mod graph;
pub mod io;
pub mod mb;
pub mod pipeline;
pub mod rsl;
pub mod sets;
pub mod synth;

pub use ci::{
    CiError, CiQuery, CiStats, CiTest, CountingTester, FisherZTester, GaussianDataset, OracleTester,
};
pub use graph::{Dag, GraphError, Skeleton, VertexSubset};
pub use mb::{compute_mb, update_mb, MbMap};
pub use pipeline::{run_fisher_z, run_oracle, Algorithm, RunOutput};
pub use rsl::{
    learn_auto, rsl_learn, LearnError, LearnOptions, LearnResult, SepSetMap, SideInfo, TieBreak,
};
