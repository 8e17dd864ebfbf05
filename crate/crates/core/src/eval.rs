//! Skeleton and separating-set accuracy metrics.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Dag, Skeleton};
use crate::rsl::SepSetMap;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("graphs have different vertex counts ({truth} vs {learned})")]
    SizeMismatch { truth: usize, learned: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SkeletonReport {
    pub f1: f64,
    pub precision: f64,
    pub recall: f64,
    pub shd: usize,
    pub extra_edges: usize,
    pub missing_edges: usize,
}

/// Compares undirected edge sets.
///
/// Precision is 1 when nothing was learned and recall is 1 when the truth is
/// empty; F1 is 1 when both are empty and 0 when exactly one is.
pub fn score_skeleton(truth: &Skeleton, learned: &Skeleton) -> Result<SkeletonReport, EvalError> {
    if truth.n() != learned.n() {
        return Err(EvalError::SizeMismatch {
            truth: truth.n(),
            learned: learned.n(),
        });
    }
    let tp = learned
        .edges()
        .filter(|&(u, v)| truth.has_edge(u, v))
        .count();
    let extra = learned.edge_count() - tp;
    let missing = truth.edge_count() - tp;
    let precision = if learned.edge_count() == 0 {
        1.0
    } else {
        tp as f64 / learned.edge_count() as f64
    };
    let recall = if truth.edge_count() == 0 {
        1.0
    } else {
        tp as f64 / truth.edge_count() as f64
    };
    let f1 = match (truth.edge_count(), learned.edge_count()) {
        (0, 0) => 1.0,
        (0, _) | (_, 0) => 0.0,
        _ if precision + recall > 0.0 => 2.0 * precision * recall / (precision + recall),
        _ => 0.0,
    };
    Ok(SkeletonReport {
        f1,
        precision,
        recall,
        shd: extra + missing,
        extra_edges: extra,
        missing_edges: missing,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SepsetReport {
    pub total: usize,
    pub mistakes: usize,
}

impl SepsetReport {
    /// Fraction of recorded sets that d-separate their pair in the truth.
    pub fn alss(&self) -> f64 {
        if self.total == 0 {
            1.0
        } else {
            1.0 - self.mistakes as f64 / self.total as f64
        }
    }
}

/// Counts recorded separating sets that fail to d-separate their pair.
/// Entries mentioning vertices outside the truth graph count as mistakes.
pub fn score_sepsets(truth: &Dag, sepsets: &SepSetMap) -> SepsetReport {
    let mut mistakes = 0;
    for ((x, y), set) in sepsets.iter() {
        if !matches!(truth.d_separated(x, y, set), Ok(true)) {
            mistakes += 1;
        }
    }
    SepsetReport {
        total: sepsets.len(),
        mistakes,
    }
}
