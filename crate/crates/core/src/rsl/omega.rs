//! Removability and neighbor search when the clique number is at most `m`.

use super::Neighborhood;
use crate::ci::{accepts_independence, CiError, CiTest};
use crate::mb::MbMap;
use crate::sets::{self, Combinations};

/// Checks the bounded-clique removability condition for `x`.
///
/// For every `S ⊆ Mb(x)` with `|S| ≤ m - 2` (by increasing size, then
/// lexicographically): every pair `y, z` in `Mb(x) \ S` must be dependent
/// given `(Mb(x) ∪ {x}) \ ({y, z} ∪ S)`, and every `y` in `Mb(x) \ S` must be
/// dependent on `x` given `Mb(x) \ ({y} ∪ S)`. Stops at the first violation.
///
/// With `m < 2` there is no admissible `S` and the condition holds vacuously.
pub fn satisfies_removable_clique<T: CiTest>(
    x: usize,
    tester: &mut T,
    mb_x: &[usize],
    m: usize,
) -> Result<bool, CiError> {
    if m < 2 {
        return Ok(true);
    }
    let mut with_x = mb_x.to_vec();
    sets::insert(&mut with_x, x);
    for size in 0..=(m - 2).min(mb_x.len()) {
        for s in Combinations::new(mb_x, size) {
            let rest = sets::difference(mb_x, &s);
            for (i, &y) in rest.iter().enumerate() {
                for &z in &rest[i + 1..] {
                    let mut drop = s.clone();
                    drop.push(y);
                    drop.push(z);
                    sets::normalize(&mut drop);
                    let cond = sets::difference(&with_x, &drop);
                    if accepts_independence(tester, y, z, &cond)? {
                        return Ok(false);
                    }
                }
            }
            for &y in &rest {
                let mut drop = s.clone();
                sets::insert(&mut drop, y);
                let cond = sets::difference(mb_x, &drop);
                if accepts_independence(tester, x, y, &cond)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Scans `candidates` in order and returns the first vertex satisfying
/// [`satisfies_removable_clique`]. Every vertex that fails has its flag
/// cleared. `Ok(None)` means no candidate passed.
pub fn find_removable_omega<T: CiTest>(
    candidates: &[usize],
    tester: &mut T,
    mbs: &MbMap,
    m: usize,
    flags: &mut [bool],
) -> Result<Option<usize>, CiError> {
    for &x in candidates {
        if satisfies_removable_clique(x, tester, mbs.get(x), m)? {
            return Ok(Some(x));
        }
        flags[x] = false;
    }
    Ok(None)
}

/// Splits `Mb(x)` into neighbors and co-parents of `x`.
///
/// `y ∈ Mb(x)` is a co-parent iff some `S ⊆ Mb(x) \ {y}` with `|S| = m - 1`
/// gives `x ⊥ y | Mb(x) \ ({y} ∪ S)`; that conditioning set is recorded as
/// the separating set. Every active vertex outside `Mb(x) ∪ {x}` is
/// separated from `x` by `Mb(x)`.
pub fn find_neighbors_omega<T: CiTest>(
    x: usize,
    active: &[usize],
    tester: &mut T,
    mb_x: &[usize],
    m: usize,
) -> Result<Neighborhood, CiError> {
    let mut out = Neighborhood::outside_boundary(x, active, mb_x);
    let k = m.saturating_sub(1);
    for &y in mb_x {
        let others = sets::difference(mb_x, &[y]);
        let mut witness = None;
        for s in Combinations::new(&others, k) {
            let cond = sets::difference(&others, &s);
            if accepts_independence(tester, x, y, &cond)? {
                witness = Some(cond);
                break;
            }
        }
        match witness {
            Some(cond) => out.sepsets.push((y, cond)),
            None => out.neighbors.push(y),
        }
    }
    Ok(out)
}
