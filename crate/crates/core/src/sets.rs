//! Small helpers over sorted, duplicate-free `usize` slices.

use std::cmp::Ordering;

/// Sorts and deduplicates in place.
pub fn normalize(v: &mut Vec<usize>) {
    v.sort_unstable();
    v.dedup();
}

pub fn contains(set: &[usize], x: usize) -> bool {
    set.binary_search(&x).is_ok()
}

/// Inserts keeping order. Returns false if already present.
pub fn insert(set: &mut Vec<usize>, x: usize) -> bool {
    match set.binary_search(&x) {
        Ok(_) => false,
        Err(pos) => {
            set.insert(pos, x);
            true
        }
    }
}

/// Removes keeping order. Returns false if absent.
pub fn remove(set: &mut Vec<usize>, x: usize) -> bool {
    match set.binary_search(&x) {
        Ok(pos) => {
            set.remove(pos);
            true
        }
        Err(_) => false,
    }
}

/// `a \ b` for sorted inputs.
pub fn difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len());
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j < b.len() && b[j] == x {
            continue;
        }
        out.push(x);
    }
    out
}

/// `a ∩ b` for sorted inputs.
pub fn intersection(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// `a ⊆ b` for sorted inputs.
pub fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

/// All subsets of `items` with exactly `k` elements, in lexicographic order
/// of positions. Each subset is emitted sorted if `items` is sorted.
pub struct Combinations<'a> {
    items: &'a [usize],
    idx: Vec<usize>,
    done: bool,
}

impl<'a> Combinations<'a> {
    pub fn new(items: &'a [usize], k: usize) -> Self {
        Combinations {
            items,
            idx: (0..k).collect(),
            done: k > items.len(),
        }
    }
}

impl Iterator for Combinations<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.iter().map(|&i| self.items[i]).collect();
        let k = self.idx.len();
        let n = self.items.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] != i + n - k {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}
