//! Recursive structure learning: repeatedly find a removable vertex, learn
//! its neighbors and separating sets, update the Markov boundaries of the
//! rest, and drop it.
//!
//! The recursion runs as a loop over a shrinking active set. Each vertex
//! carries a recheck flag: it is cleared when a removability check fails and
//! set again whenever the vertex's Markov boundary changes, since the checks
//! depend only on that boundary.

mod diamond;
mod omega;

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use thiserror::Error;

use crate::ci::{CiError, CiStats, CiTest, CountingTester};
use crate::graph::{Skeleton, VertexSubset};
use crate::mb::{update_mb, MbMap};
use crate::sets;
use crate::synth::{stream_rng, RngStream};

pub use diamond::{find_neighbors_d, find_removable_d, satisfies_removable_diamond};
pub use omega::{find_neighbors_omega, find_removable_omega, satisfies_removable_clique};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LearnError {
    #[error(transparent)]
    Ci(#[from] CiError),
    #[error("no removable vertex among {remaining} remaining vertices (clique bound {m})")]
    NoRemovableFound { remaining: usize, m: usize },
    #[error("no clique bound up to {max_m} produced a consistent skeleton")]
    Exhausted { max_m: usize },
    #[error("invalid side information: {0}")]
    InvalidSideInfo(String),
    #[error("no separating set recorded for non-adjacent pair ({0}, {1})")]
    MissingSepset(usize, usize),
}

/// Structural assumption handed to the learner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideInfo {
    /// The clique number of the true graph is at most `m`.
    BoundedClique(usize),
    DiamondFree,
    /// No side information; see [`learn_auto`].
    Auto,
}

/// Order among vertices with equal Markov boundary size.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum TieBreak {
    /// Ascending vertex index.
    #[default]
    Index,
    /// A seeded uniform permutation.
    Seeded(u64),
    /// Listed vertices first, in list order; the rest by index.
    Explicit(Vec<usize>),
}

impl TieBreak {
    fn ranks(&self, n: usize) -> Vec<usize> {
        match self {
            TieBreak::Index => (0..n).collect(),
            TieBreak::Seeded(seed) => {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.shuffle(&mut stream_rng(*seed, RngStream::TieBreak));
                let mut rank = vec![0; n];
                for (r, &v) in perm.iter().enumerate() {
                    rank[v] = r;
                }
                rank
            }
            TieBreak::Explicit(order) => {
                let mut rank: Vec<usize> = (0..n).map(|v| order.len() + v).collect();
                for (r, &v) in order.iter().enumerate() {
                    if v < n && rank[v] >= order.len() {
                        rank[v] = r;
                    }
                }
                rank
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LearnOptions {
    pub tie_break: TieBreak,
}

/// Separating sets keyed by unordered vertex pair.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SepSetMap {
    entries: BTreeMap<(usize, usize), Vec<usize>>,
}

impl SepSetMap {
    pub fn new() -> Self {
        SepSetMap::default()
    }

    pub fn insert(&mut self, x: usize, y: usize, mut set: Vec<usize>) {
        sets::normalize(&mut set);
        self.entries.insert((x.min(y), x.max(y)), set);
    }

    pub fn get(&self, x: usize, y: usize) -> Option<&[usize]> {
        self.entries.get(&(x.min(y), x.max(y))).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries as `((lo, hi), set)` in ascending pair order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &[usize])> + '_ {
        self.entries.iter().map(|(&k, v)| (k, v.as_slice()))
    }
}

/// Neighbors of a removed vertex plus separating sets `(other, set)` for the
/// active vertices it is not adjacent to.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Neighborhood {
    pub neighbors: Vec<usize>,
    pub sepsets: Vec<(usize, Vec<usize>)>,
}

impl Neighborhood {
    fn outside_boundary(x: usize, active: &[usize], mb_x: &[usize]) -> Self {
        let sepsets = active
            .iter()
            .copied()
            .filter(|&y| y != x && !sets::contains(mb_x, y))
            .map(|y| (y, mb_x.to_vec()))
            .collect();
        Neighborhood {
            neighbors: Vec::new(),
            sepsets,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnResult {
    pub skeleton: Skeleton,
    pub sepsets: SepSetMap,
    /// Tests performed by the recursion, excluding boundary discovery.
    pub stats: CiStats,
    pub removal_order: Vec<usize>,
    pub fallback_used: bool,
}

struct RemovalState {
    active: VertexSubset,
    flags: Vec<bool>,
    rank: Vec<usize>,
}

impl RemovalState {
    fn new(n: usize, tie_break: &TieBreak) -> Self {
        RemovalState {
            active: VertexSubset::full(n),
            flags: vec![true; n],
            rank: tie_break.ranks(n),
        }
    }

    /// Active vertices sorted by `(|Mb|, rank)`, optionally only flagged ones.
    fn scan_order(&self, mbs: &MbMap, flagged_only: bool) -> Vec<usize> {
        let mut order: Vec<usize> = self
            .active
            .vertices()
            .iter()
            .copied()
            .filter(|&v| !flagged_only || self.flags[v])
            .collect();
        order.sort_by_key(|&v| (mbs.get(v).len(), self.rank[v]));
        order
    }
}

/// Learns the skeleton and separating sets from initial Markov boundaries
/// `mbs` under a fixed side-information variant.
pub fn rsl_learn<T: CiTest>(
    tester: &mut CountingTester<T>,
    mut mbs: MbMap,
    side: SideInfo,
    opts: &LearnOptions,
) -> Result<LearnResult, LearnError> {
    match side {
        SideInfo::Auto => {
            return Err(LearnError::InvalidSideInfo(
                "automatic mode runs through learn_auto".into(),
            ))
        }
        SideInfo::BoundedClique(0) => {
            return Err(LearnError::InvalidSideInfo(
                "clique bound must be at least 1".into(),
            ))
        }
        _ => {}
    }
    let n = mbs.n();
    let start = tester.stats();
    let mut state = RemovalState::new(n, &opts.tie_break);
    let mut skeleton = Skeleton::empty(n);
    let mut sepsets = SepSetMap::new();
    let mut removal_order = Vec::with_capacity(n);
    let mut fallback_used = false;

    while state.active.len() > 1 {
        let candidates = state.scan_order(&mbs, true);
        let (x, neighborhood) = match side {
            SideInfo::BoundedClique(m) => {
                let found = find_removable_omega(&candidates, tester, &mbs, m, &mut state.flags)?;
                let x = found.ok_or(LearnError::NoRemovableFound {
                    remaining: state.active.len(),
                    m,
                })?;
                let nb = find_neighbors_omega(x, state.active.vertices(), tester, mbs.get(x), m)?;
                (x, nb)
            }
            SideInfo::DiamondFree => {
                let pool = state.scan_order(&mbs, false);
                let (x, fell_back) =
                    find_removable_d(&candidates, &pool, tester, &mbs, &mut state.flags)?;
                fallback_used |= fell_back;
                let nb = find_neighbors_d(x, state.active.vertices(), tester, mbs.get(x))?;
                (x, nb)
            }
            SideInfo::Auto => unreachable!(),
        };

        for &y in &neighborhood.neighbors {
            skeleton
                .add_edge(x, y)
                .expect("active vertices are in range");
        }
        for (y, set) in neighborhood.sepsets {
            sepsets.insert(x, y, set);
        }
        let update = update_mb(x, tester, &neighborhood.neighbors, &mut mbs)?;
        for v in update.changed {
            state.flags[v] = true;
        }
        state.active.remove(x);
        removal_order.push(x);
    }
    removal_order.extend_from_slice(state.active.vertices());

    Ok(LearnResult {
        skeleton,
        sepsets,
        stats: tester.stats().since(&start),
        removal_order,
        fallback_used,
    })
}

/// Why an attempt of [`learn_auto`] was rejected or accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttemptOutcome {
    Accepted,
    NoRemovableFound,
    /// The learned skeleton's clique number exceeded the bound.
    CliqueExceedsBound(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Attempt {
    pub m: usize,
    pub outcome: AttemptOutcome,
    pub stats: CiStats,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AutoResult {
    pub result: LearnResult,
    pub m_used: usize,
    pub attempts: Vec<Attempt>,
    /// Tests over every attempt. The answer cache is shared between attempts.
    pub total_stats: CiStats,
}

/// Runs the bounded-clique learner with `m = 1, 2, ...` and returns the first
/// output whose clique number does not exceed `m`.
pub fn learn_auto<T: CiTest>(
    tester: &mut CountingTester<T>,
    mbs: &MbMap,
    opts: &LearnOptions,
) -> Result<AutoResult, LearnError> {
    let n = mbs.n();
    let start = tester.stats();
    let max_m = n.max(1);
    let mut attempts = Vec::new();
    for m in 1..=max_m {
        let before = tester.stats();
        match rsl_learn(tester, mbs.clone(), SideInfo::BoundedClique(m), opts) {
            Ok(result) => {
                let omega = result.skeleton.clique_number();
                let stats = tester.stats().since(&before);
                if omega <= m {
                    attempts.push(Attempt {
                        m,
                        outcome: AttemptOutcome::Accepted,
                        stats,
                    });
                    return Ok(AutoResult {
                        result,
                        m_used: m,
                        attempts,
                        total_stats: tester.stats().since(&start),
                    });
                }
                attempts.push(Attempt {
                    m,
                    outcome: AttemptOutcome::CliqueExceedsBound(omega),
                    stats,
                });
            }
            Err(LearnError::NoRemovableFound { .. }) => attempts.push(Attempt {
                m,
                outcome: AttemptOutcome::NoRemovableFound,
                stats: tester.stats().since(&before),
            }),
            Err(e) => return Err(e),
        }
    }
    Err(LearnError::Exhausted { max_m })
}

/// V-structures `(y, x, z)` with `y < z`: `y – x – z` in the skeleton, `y`
/// and `z` non-adjacent, and `x` absent from their separating set.
pub fn extract_vstructures(
    skeleton: &Skeleton,
    sepsets: &SepSetMap,
) -> Result<BTreeSet<(usize, usize, usize)>, LearnError> {
    let adj = skeleton.adjacency();
    let mut out = BTreeSet::new();
    for (x, nbrs) in adj.iter().enumerate() {
        for (i, &y) in nbrs.iter().enumerate() {
            for &z in &nbrs[i + 1..] {
                if skeleton.has_edge(y, z) {
                    continue;
                }
                let set = sepsets.get(y, z).ok_or(LearnError::MissingSepset(y, z))?;
                if !sets::contains(set, x) {
                    out.insert((y, x, z));
                }
            }
        }
    }
    Ok(out)
}
