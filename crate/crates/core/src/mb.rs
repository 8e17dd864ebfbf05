//! Markov boundary discovery by total conditioning, and the incremental
//! update applied after each vertex removal.

use serde::{Deserialize, Serialize};

use crate::ci::{accepts_independence, CiError, CiTest};
use crate::sets;

/// Markov boundary of every vertex within the currently active set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MbMap {
    boundaries: Vec<Vec<usize>>,
}

impl MbMap {
    pub fn from_boundaries(boundaries: Vec<Vec<usize>>) -> Self {
        let boundaries = boundaries
            .into_iter()
            .map(|mut b| {
                sets::normalize(&mut b);
                b
            })
            .collect();
        MbMap { boundaries }
    }

    pub fn n(&self) -> usize {
        self.boundaries.len()
    }

    pub fn get(&self, x: usize) -> &[usize] {
        &self.boundaries[x]
    }

    pub fn is_symmetric(&self) -> bool {
        self.boundaries.iter().enumerate().all(|(x, b)| {
            b.iter()
                .all(|&y| y != x && sets::contains(&self.boundaries[y], x))
        })
    }

    fn unlink(&mut self, y: usize, z: usize) {
        sets::remove(&mut self.boundaries[y], z);
        sets::remove(&mut self.boundaries[z], y);
    }
}

/// Tests every pair against all remaining variables: `x` and `y` enter each
/// other's boundary iff they are dependent given `V \ {x, y}`.
pub fn compute_mb<T: CiTest>(tester: &mut T, n: usize) -> Result<MbMap, CiError> {
    let mut boundaries = vec![Vec::new(); n];
    let mut rest = Vec::with_capacity(n.saturating_sub(2));
    for x in 0..n {
        for y in x + 1..n {
            rest.clear();
            rest.extend((0..n).filter(|&v| v != x && v != y));
            if !accepts_independence(tester, x, y, &rest)? {
                boundaries[x].push(y);
                boundaries[y].push(x);
            }
        }
    }
    Ok(MbMap::from_boundaries(boundaries))
}

/// Result of [`update_mb`]: the vertices whose boundary changed, in
/// ascending order (used to re-arm removability checks).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MbUpdate {
    pub changed: Vec<usize>,
}

/// Updates `mbs` in place after removing `x`, whose neighbors in the current
/// graph are `neighbors_x`.
///
/// `x` is dropped from every boundary it appears in. If `x` had no co-parents
/// (`neighbors_x == Mb(x)`), each pair of its neighbors that are still in
/// each other's boundary is tested given the smaller of their two boundaries
/// (minus the pair) and unlinked on independence. Pairs are visited in
/// lexicographic order. The boundary of `x` itself is cleared.
pub fn update_mb<T: CiTest>(
    x: usize,
    tester: &mut T,
    neighbors_x: &[usize],
    mbs: &mut MbMap,
) -> Result<MbUpdate, CiError> {
    let mb_x = std::mem::take(&mut mbs.boundaries[x]);
    let mut changed = Vec::with_capacity(mb_x.len());
    for &y in &mb_x {
        if sets::remove(&mut mbs.boundaries[y], x) {
            changed.push(y);
        }
    }
    if neighbors_x == mb_x.as_slice() {
        for (i, &y) in neighbors_x.iter().enumerate() {
            for &z in &neighbors_x[i + 1..] {
                if !sets::contains(&mbs.boundaries[y], z) {
                    continue;
                }
                let from_y = sets::difference(&mbs.boundaries[y], &[z]);
                let from_z = sets::difference(&mbs.boundaries[z], &[y]);
                let cond = if from_z.len() < from_y.len() {
                    from_z
                } else {
                    from_y
                };
                if accepts_independence(tester, y, z, &cond)? {
                    mbs.unlink(y, z);
                    changed.push(y);
                    changed.push(z);
                }
            }
        }
    }
    sets::normalize(&mut changed);
    Ok(MbUpdate { changed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ci::{CountingTester, OracleTester};
    use crate::graph::fixtures::*;
    use crate::graph::{Dag, VertexSubset};

    fn truth(g: &Dag) -> MbMap {
        MbMap::from_boundaries((0..g.n()).map(|x| g.true_mb(x).unwrap()).collect())
    }

    #[test]
    fn total_conditioning_on_small_graphs() {
        let g = chain3();
        let mut t = CountingTester::new(OracleTester::new(&g));
        let mbs = compute_mb(&mut t, 3).unwrap();
        assert_eq!(mbs.get(0), &[1]);
        assert_eq!(mbs.get(1), &[0, 2]);
        assert_eq!(mbs.get(2), &[1]);
        assert_eq!(t.stats().total_tests, 3);

        let g = collider3();
        let mut t = OracleTester::new(&g);
        assert_eq!(compute_mb(&mut t, 3).unwrap().get(0), &[1, 2]);

        let g = diamond_left();
        let mut t = OracleTester::new(&g);
        assert_eq!(compute_mb(&mut t, 4).unwrap(), truth(&g));
    }

    #[test]
    fn vertex_with_coparents_costs_no_tests() {
        // 0 -> 3 <- 1, 3 -> 4 <- 2: vertex 0 has co-parent 1, so N(0) != Mb(0)
        let g = Dag::from_edges(5, &[(0, 3), (1, 3), (3, 4), (2, 4)]).unwrap();
        assert!(g.is_removable(0).unwrap());
        let mut mbs = truth(&g);
        assert_eq!(mbs.get(0), &[1, 3]);
        let mut t = CountingTester::new(OracleTester::new(&g));
        let upd = update_mb(0, &mut t, &[3], &mut mbs).unwrap();
        assert_eq!(t.stats().total_tests, 0);
        assert_eq!(upd.changed, vec![1, 3]);

        let kept = [1usize, 2, 3, 4];
        let rest = g.induced_subgraph(&VertexSubset::new(5, kept).unwrap());
        for (local, &orig) in kept.iter().enumerate() {
            let want: Vec<usize> = rest
                .true_mb(local)
                .unwrap()
                .into_iter()
                .map(|v| kept[v])
                .collect();
            assert_eq!(mbs.get(orig), want.as_slice());
        }
    }

    #[test]
    fn chain_sink_removal() {
        let g = chain3();
        let mut mbs = truth(&g);
        let mut t = CountingTester::new(OracleTester::new(&g));
        update_mb(2, &mut t, &[1], &mut mbs).unwrap();
        assert_eq!(mbs.get(0), &[1]);
        assert_eq!(mbs.get(1), &[0]);
        assert!(t.stats().total_tests <= 1);
    }

    #[test]
    fn collider_sink_removal_separates_parents() {
        let g = collider3();
        let mut mbs = truth(&g);
        let mut t = CountingTester::new(OracleTester::new(&g));
        let upd = update_mb(2, &mut t, &[0, 1], &mut mbs).unwrap();
        assert!(mbs.get(0).is_empty());
        assert!(mbs.get(1).is_empty());
        assert_eq!(t.stats().total_tests, 1);
        assert!(mbs.is_symmetric());
        assert_eq!(upd.changed, vec![0, 1]);
    }
}
