//! Removability and neighbor search for diamond-free graphs.

use super::Neighborhood;
use crate::ci::{accepts_independence, CiError, CiTest};
use crate::mb::MbMap;
use crate::sets;

/// Every pair `y, z` in `Mb(x)` is dependent given `(Mb(x) ∪ {x}) \ {y, z}`.
pub fn satisfies_removable_diamond<T: CiTest>(
    x: usize,
    tester: &mut T,
    mb_x: &[usize],
) -> Result<bool, CiError> {
    let mut with_x = mb_x.to_vec();
    sets::insert(&mut with_x, x);
    for (i, &y) in mb_x.iter().enumerate() {
        for &z in &mb_x[i + 1..] {
            let cond = sets::difference(&with_x, &[y, z]);
            if accepts_independence(tester, y, z, &cond)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Scans `candidates` in order, clearing the flag of every vertex that fails
/// the check. If none passes, falls back to the first vertex of `fallback`
/// (all active vertices ordered by boundary size) and reports `true`.
pub fn find_removable_d<T: CiTest>(
    candidates: &[usize],
    fallback: &[usize],
    tester: &mut T,
    mbs: &MbMap,
    flags: &mut [bool],
) -> Result<(usize, bool), CiError> {
    for &x in candidates {
        if satisfies_removable_diamond(x, tester, mbs.get(x))? {
            return Ok((x, false));
        }
        flags[x] = false;
    }
    let x = *fallback
        .first()
        .expect("fallback pool holds at least one active vertex");
    Ok((x, true))
}

/// `y ∈ Mb(x)` is a co-parent iff some single `z ∈ Mb(x) \ {y}` gives
/// `x ⊥ y | Mb(x) \ {y, z}`.
pub fn find_neighbors_d<T: CiTest>(
    x: usize,
    active: &[usize],
    tester: &mut T,
    mb_x: &[usize],
) -> Result<Neighborhood, CiError> {
    let mut out = Neighborhood::outside_boundary(x, active, mb_x);
    for &y in mb_x {
        let mut witness = None;
        for &z in mb_x.iter().filter(|&&z| z != y) {
            let cond = sets::difference(mb_x, &[y.min(z), y.max(z)]);
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
