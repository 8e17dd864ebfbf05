//! Directed acyclic graphs, skeletons, d-separation and the structural
//! queries (cliques, diamonds, removability) the learners are checked against.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sets;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("edge set contains a directed cycle")]
    Cycle,
    #[error("invalid vertex arguments: {0}")]
    InvalidVertex(String),
}

/// Directed acyclic graph over vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
}

impl Dag {
    pub fn empty(n: usize) -> Self {
        Dag {
            parents: vec![Vec::new(); n],
            children: vec![Vec::new(); n],
        }
    }

    /// Builds a DAG from directed edges `(from, to)`. Duplicate edges are merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut dag = Dag::empty(n);
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if sets::insert(&mut dag.parents[v], u) {
                sets::insert(&mut dag.children[u], v);
            }
        }
        if dag.topological_order().is_none() {
            return Err(GraphError::Cycle);
        }
        Ok(dag)
    }

    /// Complete DAG on `n` vertices, oriented by index.
    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Dag::from_edges(n, &edges).expect("index order is acyclic")
    }

    pub fn n(&self) -> usize {
        self.parents.len()
    }

    pub fn parents(&self, x: usize) -> &[usize] {
        &self.parents[x]
    }

    pub fn children(&self, x: usize) -> &[usize] {
        &self.children[x]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        sets::contains(&self.children[u], v)
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.has_edge(u, v) || self.has_edge(v, u)
    }

    pub fn edge_count(&self) -> usize {
        self.parents.iter().map(Vec::len).sum()
    }

    /// Directed edges sorted by `(from, to)`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self
            .children
            .iter()
            .enumerate()
            .flat_map(|(u, ch)| ch.iter().map(move |&v| (u, v)))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn neighbors(&self, x: usize) -> Vec<usize> {
        let mut out = self.parents[x].clone();
        out.extend_from_slice(&self.children[x]);
        sets::normalize(&mut out);
        out
    }

    pub fn max_in_degree(&self) -> usize {
        self.parents.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n())
            .map(|x| self.parents[x].len() + self.children[x].len())
            .max()
            .unwrap_or(0)
    }

    /// Kahn's algorithm; `None` if the edge set has a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.n();
        let mut indeg: Vec<usize> = self.parents.iter().map(Vec::len).collect();
        let mut queue: VecDeque<usize> = (0..n).filter(|&x| indeg[x] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in &self.children[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    queue.push_back(v);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn skeleton(&self) -> Skeleton {
        Skeleton::from_pairs(self.n(), self.edges()).expect("dag edges are valid pairs")
    }

    fn check_vertex(&self, x: usize) -> Result<(), GraphError> {
        if x >= self.n() {
            Err(GraphError::VertexOutOfRange {
                vertex: x,
                n: self.n(),
            })
        } else {
            Ok(())
        }
    }

    /// Subgraph induced by `vs`, re-indexed to `0..vs.len()` in the order of
    /// `vs.vertices()`.
    pub fn induced_subgraph(&self, vs: &VertexSubset) -> Dag {
        let members = vs.vertices();
        let mut local = vec![usize::MAX; self.n()];
        for (i, &v) in members.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in members.iter().enumerate() {
            for &c in &self.children[v] {
                if local[c] != usize::MAX {
                    edges.push((i, local[c]));
                }
            }
        }
        Dag::from_edges(members.len(), &edges).expect("induced subgraph of a dag is a dag")
    }

    /// True iff every path between `x` and `y` is blocked by `s`.
    ///
    /// Reachability in the moral graph of the ancestral closure of
    /// `{x, y} ∪ s`, with `s` deleted.
    pub fn d_separated(&self, x: usize, y: usize, s: &[usize]) -> Result<bool, GraphError> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        for &v in s {
            self.check_vertex(v)?;
        }
        if x == y {
            return Err(GraphError::InvalidVertex(format!("x = y = {x}")));
        }
        if s.contains(&x) || s.contains(&y) {
            return Err(GraphError::InvalidVertex(
                "conditioning set contains an endpoint".into(),
            ));
        }
        Ok(self.d_separated_unchecked(x, y, s))
    }

    pub(crate) fn d_separated_unchecked(&self, x: usize, y: usize, s: &[usize]) -> bool {
        let n = self.n();
        let mut in_anc = vec![false; n];
        let mut stack: Vec<usize> = Vec::with_capacity(s.len() + 2);
        stack.push(x);
        stack.push(y);
        stack.extend_from_slice(s);
        for &v in &stack {
            in_anc[v] = true;
        }
        while let Some(v) = stack.pop() {
            for &p in &self.parents[v] {
                if !in_anc[p] {
                    in_anc[p] = true;
                    stack.push(p);
                }
            }
        }
        let mut blocked = vec![false; n];
        for &v in s {
            blocked[v] = true;
        }

        let mut seen = vec![false; n];
        seen[x] = true;
        let mut queue = VecDeque::from([x]);
        let visit = |w: usize, queue: &mut VecDeque<usize>, seen: &mut Vec<bool>| -> bool {
            if w == y {
                return true;
            }
            if !seen[w] && !blocked[w] {
                seen[w] = true;
                queue.push_back(w);
            }
            false
        };
        while let Some(v) = queue.pop_front() {
            for &p in &self.parents[v] {
                if visit(p, &mut queue, &mut seen) {
                    return false;
                }
            }
            for &c in &self.children[v] {
                if !in_anc[c] {
                    continue;
                }
                if visit(c, &mut queue, &mut seen) {
                    return false;
                }
                // moral edges: parents of a common child in the ancestral set
                for &p in &self.parents[c] {
                    if p != v && visit(p, &mut queue, &mut seen) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Parents, children and co-parents of `x`.
    pub fn true_mb(&self, x: usize) -> Result<Vec<usize>, GraphError> {
        self.check_vertex(x)?;
        Ok(self.mb_unchecked(x))
    }

    pub(crate) fn mb_unchecked(&self, x: usize) -> Vec<usize> {
        let mut out = self.parents[x].clone();
        for &c in &self.children[x] {
            out.push(c);
            out.extend(self.parents[c].iter().copied().filter(|&p| p != x));
        }
        sets::normalize(&mut out);
        out
    }

    /// Graph-side removability: for every child `w` of `x`, (1) every neighbor
    /// of `x` other than `w` is adjacent to `w`, and (2) every child `y` of `x`
    /// that is also a parent of `w` satisfies `Pa(y) ⊆ Pa(w)`.
    pub fn is_removable(&self, x: usize) -> Result<bool, GraphError> {
        self.check_vertex(x)?;
        let nx = self.neighbors(x);
        for &w in &self.children[x] {
            let cond1 = nx.iter().all(|&v| v == w || self.adjacent(v, w));
            if !cond1 {
                return Ok(false);
            }
            for &y in &self.children[x] {
                if self.has_edge(y, w) && !sets::is_subset(&self.parents[y], &self.parents[w]) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Set of `(y, x, z)` with `y → x ← z`, `y < z`, `y` and `z` non-adjacent.
    pub fn v_structures(&self) -> BTreeSet<(usize, usize, usize)> {
        let mut out = BTreeSet::new();
        for x in 0..self.n() {
            let pa = &self.parents[x];
            for (i, &y) in pa.iter().enumerate() {
                for &z in &pa[i + 1..] {
                    if !self.adjacent(y, z) {
                        out.insert((y, x, z));
                    }
                }
            }
        }
        out
    }

    pub fn clique_number(&self) -> usize {
        self.skeleton().clique_number()
    }

    pub fn is_diamond_free(&self) -> bool {
        self.skeleton().is_diamond_free()
    }
}

/// Undirected graph with canonical `(lo, hi)` edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skeleton {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Skeleton {
    pub fn empty(n: usize) -> Self {
        Skeleton {
            n,
            edges: BTreeSet::new(),
        }
    }

    pub fn from_pairs(
        n: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut sk = Skeleton::empty(n);
        for (u, v) in pairs {
            sk.add_edge(u, v)?;
        }
        Ok(sk)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        for w in [u, v] {
            if w >= self.n {
                return Err(GraphError::VertexOutOfRange {
                    vertex: w,
                    n: self.n,
                });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.edges.insert((u.min(v), u.max(v)));
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// Sorted adjacency lists.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    /// Size of the largest clique, by Bron–Kerbosch with pivoting. An
    /// edgeless graph on at least one vertex has clique number 1.
    pub fn clique_number(&self) -> usize {
        if self.n == 0 {
            return 0;
        }
        let adj = self.adjacency();
        let mut best = 1;
        // Degeneracy-free variant: seed each vertex with its higher-indexed
        // neighbors so every clique is found from its lowest vertex.
        for v in 0..self.n {
            let cand: Vec<usize> = adj[v].iter().copied().filter(|&w| w > v).collect();
            if cand.len() < best {
                continue;
            }
            bron_kerbosch(&adj, 1, cand, Vec::new(), &mut best);
        }
        best
    }

    /// True iff no four vertices induce exactly five edges.
    ///
    /// For each edge `u–v`, a diamond with that edge as the diagonal exists
    /// iff two common neighbors of `u` and `v` are non-adjacent.
    pub fn is_diamond_free(&self) -> bool {
        let adj = self.adjacency();
        for &(u, v) in &self.edges {
            let common = sets::intersection(&adj[u], &adj[v]);
            for (i, &a) in common.iter().enumerate() {
                for &b in &common[i + 1..] {
                    if !sets::contains(&adj[a], b) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn bron_kerbosch(
    adj: &[Vec<usize>],
    size: usize,
    mut cand: Vec<usize>,
    mut excl: Vec<usize>,
    best: &mut usize,
) {
    if cand.is_empty() {
        if excl.is_empty() && size > *best {
            *best = size;
        }
        return;
    }
    if size + cand.len() <= *best {
        return;
    }
    let pivot = cand
        .iter()
        .chain(excl.iter())
        .copied()
        .max_by_key(|&u| sets::intersection(&cand, &adj[u]).len())
        .expect("candidate set is nonempty");
    let branch: Vec<usize> = sets::difference(&cand, &adj[pivot]);
    for v in branch {
        let next_cand = sets::intersection(&cand, &adj[v]);
        let next_excl = sets::intersection(&excl, &adj[v]);
        bron_kerbosch(adj, size + 1, next_cand, next_excl, best);
        sets::remove(&mut cand, v);
        sets::insert(&mut excl, v);
    }
}

/// Sorted subset of a graph's vertex range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSubset {
    active: Vec<usize>,
}

impl VertexSubset {
    pub fn new(n: usize, vertices: impl IntoIterator<Item = usize>) -> Result<Self, GraphError> {
        let mut active: Vec<usize> = vertices.into_iter().collect();
        if let Some(&bad) = active.iter().find(|&&v| v >= n) {
            return Err(GraphError::VertexOutOfRange { vertex: bad, n });
        }
        sets::normalize(&mut active);
        Ok(VertexSubset { active })
    }

    pub fn full(n: usize) -> Self {
        VertexSubset {
            active: (0..n).collect(),
        }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.active
    }

    pub fn len(&self) -> usize {
        self.active.len()
    }

    pub fn is_empty(&self) -> bool {
        self.active.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        sets::contains(&self.active, x)
    }

    pub fn remove(&mut self, x: usize) -> bool {
        sets::remove(&mut self.active, x)
    }

    /// Everything in the subset except `x`.
    pub fn without(&self, x: usize) -> VertexSubset {
        let mut active = self.active.clone();
        sets::remove(&mut active, x);
        VertexSubset { active }
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    /// Enumerates simple paths and applies the blocked-path definition.
    fn brute_dsep(g: &Dag, x: usize, y: usize, s: &[usize]) -> bool {
        let n = g.n();
        let mut desc_or_self_in_s = vec![false; n];
        for v in 0..n {
            let mut stack = vec![v];
            let mut seen = vec![false; n];
            seen[v] = true;
            while let Some(u) = stack.pop() {
                if s.contains(&u) {
                    desc_or_self_in_s[v] = true;
                    break;
                }
                for &c in g.children(u) {
                    if !seen[c] {
                        seen[c] = true;
                        stack.push(c);
                    }
                }
            }
        }
        fn dfs(
            g: &Dag,
            path: &mut Vec<usize>,
            y: usize,
            s: &[usize],
            open_collider: &[bool],
        ) -> bool {
            let last = *path.last().unwrap();
            if last == y {
                // check every interior vertex
                for k in 1..path.len() - 1 {
                    let (a, b, c) = (path[k - 1], path[k], path[k + 1]);
                    let collider = g.has_edge(a, b) && g.has_edge(c, b);
                    if collider && !open_collider[b] {
                        return false;
                    }
                    if !collider && s.contains(&b) {
                        return false;
                    }
                }
                return true;
            }
            for w in g.neighbors(last) {
                if !path.contains(&w) {
                    path.push(w);
                    if dfs(g, path, y, s, open_collider) {
                        return true;
                    }
                    path.pop();
                }
            }
            false
        }
        !dfs(g, &mut vec![x], y, s, &desc_or_self_in_s)
    }

    #[test]
    fn dsep_basic_examples() {
        assert!(chain3().d_separated(0, 2, &[1]).unwrap());
        assert!(!chain3().d_separated(0, 2, &[]).unwrap());
        let c = collider3();
        assert!(c.d_separated(0, 1, &[]).unwrap());
        assert!(!c.d_separated(0, 1, &[2]).unwrap());
        let d = diamond_left();
        assert!(d.d_separated(1, 2, &[0]).unwrap());
        assert!(!d.d_separated(1, 2, &[0, 3]).unwrap());
        assert!(brute_dsep(&d, 1, 2, &[0]));
        assert!(!brute_dsep(&d, 1, 2, &[0, 3]));
    }

    #[test]
    fn dsep_rejects_bad_arguments() {
        let g = chain3();
        assert!(g.d_separated(0, 0, &[]).is_err());
        assert!(g.d_separated(0, 2, &[0]).is_err());
        assert!(g.d_separated(0, 7, &[]).is_err());
    }

    #[test]
    fn dsep_matches_path_enumeration_on_small_random_dags() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..150 {
            let n = rng.random_range(2..=6);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(0.45) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Dag::from_edges(n, &edges).unwrap();
            for x in 0..n {
                for y in x + 1..n {
                    let rest: Vec<usize> = (0..n).filter(|&v| v != x && v != y).collect();
                    for mask in 0..(1u32 << rest.len()) {
                        let s: Vec<usize> = rest
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| mask >> i & 1 == 1)
                            .map(|(_, &v)| v)
                            .collect();
                        assert_eq!(
                            g.d_separated(x, y, &s).unwrap(),
                            brute_dsep(&g, x, y, &s),
                            "edges {edges:?} x={x} y={y} s={s:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_cycles_and_self_loops() {
        assert_eq!(
            Dag::from_edges(3, &[(0, 1), (1, 2), (2, 0)]),
            Err(GraphError::Cycle)
        );
        assert_eq!(Dag::from_edges(2, &[(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert!(matches!(
            Dag::from_edges(2, &[(0, 2)]),
            Err(GraphError::VertexOutOfRange { vertex: 2, n: 2 })
        ));
    }

    #[test]
    fn induced_subgraph_examples() {
        let vs = VertexSubset::new(3, [0, 2]).unwrap();
        let sub = chain3().induced_subgraph(&vs);
        assert_eq!(sub.n(), 2);
        assert_eq!(sub.edge_count(), 0);

        let k4 = Dag::complete(4);
        let sub = k4.induced_subgraph(&VertexSubset::new(4, [0, 2, 3]).unwrap());
        assert_eq!(sub.edge_count(), 3);

        let sub = diamond_left().induced_subgraph(&VertexSubset::new(4, [1, 2, 3]).unwrap());
        // B, C, D re-indexed to 0, 1, 2
        assert_eq!(sub.edges(), vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn diamond_detection() {
        assert!(!diamond_left().is_diamond_free());
        assert!(!diamond_right().is_diamond_free());
        let middle = Dag::from_edges(4, &[(0, 1), (2, 0), (0, 3), (1, 3), (2, 3)]).unwrap();
        assert!(!middle.is_diamond_free());
        assert!(Dag::complete(4).is_diamond_free());
        assert!(Dag::complete(3).is_diamond_free());
        assert!(Dag::empty(2).is_diamond_free());
    }

    #[test]
    fn clique_numbers() {
        assert_eq!(Dag::empty(5).clique_number(), 1);
        assert_eq!(Dag::empty(0).clique_number(), 0);
        assert_eq!(diamond_left().clique_number(), 3);
        for k in 1..=7 {
            assert_eq!(Dag::complete(k).clique_number(), k);
        }
        assert_eq!(chain3().clique_number(), 2);
    }

    #[test]
    fn removability_examples() {
        let d = diamond_left();
        assert!(!d.is_removable(0).unwrap());
        assert!(d.is_removable(3).unwrap());
        assert!(d.is_removable(1).unwrap());
        assert!(chain3().is_removable(2).unwrap());
        assert!(d.is_removable(9).is_err());
    }

    #[test]
    fn markov_boundaries() {
        assert_eq!(chain3().true_mb(1).unwrap(), vec![0, 2]);
        assert_eq!(collider3().true_mb(0).unwrap(), vec![1, 2]);
        let d = diamond_left();
        for x in 0..4 {
            assert_eq!(d.true_mb(x).unwrap().len(), 3);
        }
    }

    #[test]
    fn v_structures_of_collider() {
        let vs = collider3().v_structures();
        assert_eq!(vs.into_iter().collect::<Vec<_>>(), vec![(0, 2, 1)]);
        assert!(chain3().v_structures().is_empty());
    }
}
