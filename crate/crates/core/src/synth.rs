//! Random DAGs and linear-Gaussian structural equation models.
//!
//! Every random draw comes from ChaCha8 seeded with a `u64` and switched to a
//! fixed stream per purpose (see [`RngStream`]), so the same seed can drive
//! the graph, the model parameters and the samples without the draws
//! overlapping.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::ci::GaussianDataset;
use crate::graph::Dag;

/// ChaCha stream identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RngStream {
    Graph = 0,
    Model = 1,
    Data = 2,
    TieBreak = 3,
}

pub fn stream_rng(seed: u64, stream: RngStream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthError {
    #[error("edge probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("model shape does not match the graph: {0}")]
    Shape(String),
    #[error("need at least one sample")]
    NoSamples,
}

/// Erdős–Rényi DAG: a uniformly random topological order, then each forward
/// pair independently with probability `p`.
pub fn erdos_renyi_dag(n: usize, p: f64, seed: u64) -> Result<Dag, SynthError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(SynthError::BadProbability(p));
    }
    let mut rng = stream_rng(seed, RngStream::Graph);
    let mut order: Vec<usize> = (0..n).collect();
    rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut rng);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                edges.push((order[i], order[j]));
            }
        }
    }
    Ok(Dag::from_edges(n, &edges).expect("edges follow a topological order"))
}

/// `X_v = Σ_{u ∈ Pa(v)} c_{uv} X_u + σ_v ε_v` with standard normal `ε_v`.
#[derive(Debug, Clone, PartialEq)]
pub struct SemModel {
    dag: Dag,
    // coefficients[v][i] multiplies parents(v)[i]
    coefficients: Vec<Vec<f64>>,
    noise_stddev: Vec<f64>,
}

impl SemModel {
    pub fn new(
        dag: Dag,
        coefficients: Vec<Vec<f64>>,
        noise_stddev: Vec<f64>,
    ) -> Result<Self, SynthError> {
        if coefficients.len() != dag.n() || noise_stddev.len() != dag.n() {
            return Err(SynthError::Shape("one entry per vertex expected".into()));
        }
        for (v, c) in coefficients.iter().enumerate() {
            if c.len() != dag.parents(v).len() {
                return Err(SynthError::Shape(format!(
                    "vertex {v} has {} parents but {} coefficients",
                    dag.parents(v).len(),
                    c.len()
                )));
            }
        }
        if let Some(s) = noise_stddev.iter().find(|s| s.is_nan() || **s <= 0.0) {
            return Err(SynthError::Shape(format!(
                "noise scale {s} is not positive"
            )));
        }
        Ok(SemModel {
            dag,
            coefficients,
            noise_stddev,
        })
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    /// Coefficient on edge `u → v`, if present.
    pub fn coefficient(&self, u: usize, v: usize) -> Option<f64> {
        let pos = self.dag.parents(v).binary_search(&u).ok()?;
        Some(self.coefficients[v][pos])
    }

    pub fn noise_stddev(&self) -> &[f64] {
        &self.noise_stddev
    }
}

/// Coefficients uniform on `[-1.5, -1] ∪ [1, 1.5]`, noise scale uniform on
/// `[√0.5, √1.5]`.
pub fn draw_sem(dag: &Dag, seed: u64) -> SemModel {
    let mut rng = stream_rng(seed, RngStream::Model);
    let coefficients = (0..dag.n())
        .map(|v| {
            dag.parents(v)
                .iter()
                .map(|_| {
                    let magnitude = rng.random_range(1.0..=1.5);
                    if rng.random_bool(0.5) {
                        magnitude
                    } else {
                        -magnitude
                    }
                })
                .collect()
        })
        .collect();
    let noise_stddev = (0..dag.n())
        .map(|_| rng.random_range(0.5f64.sqrt()..=1.5f64.sqrt()))
        .collect();
    SemModel {
        dag: dag.clone(),
        coefficients,
        noise_stddev,
    }
}

/// Forward-samples `n_samples` rows in topological order.
pub fn sample_sem(
    model: &SemModel,
    n_samples: usize,
    seed: u64,
) -> Result<GaussianDataset, SynthError> {
    if n_samples == 0 {
        return Err(SynthError::NoSamples);
    }
    let mut rng = stream_rng(seed, RngStream::Data);
    let n = model.dag.n();
    let order = model.dag.topological_order().expect("dag");
    let mut columns = vec![Vec::new(); n];
    for &v in &order {
        let sigma = model.noise_stddev[v];
        let mut col: Vec<f64> = (0..n_samples)
            .map(|_| {
                let e: f64 = StandardNormal.sample(&mut rng);
                sigma * e
            })
            .collect();
        for (&u, &c) in model.dag.parents(v).iter().zip(&model.coefficients[v]) {
            for (x, pu) in col.iter_mut().zip(&columns[u]) {
                *x += c * pu;
            }
        }
        columns[v] = col;
    }
    Ok(GaussianDataset::from_columns(columns).expect("equal-length columns"))
}
