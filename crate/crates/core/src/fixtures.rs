//! Bundled benchmark graphs.

use crate::graph::Dag;
use crate::io::{parse_graph, GraphFile};

const DIABETES: &str = include_str!("../fixtures/diabetes.edges");

/// Names accepted by [`named`].
pub const NAMES: &[&str] = &["diabetes", "chain3", "collider3", "diamond"];

/// Induced subgraph on the first 104 variables of the Diabetes network:
/// 104 vertices, 148 edges, clique number 3, diamond-free.
pub fn diabetes() -> GraphFile {
    parse_graph(DIABETES).expect("bundled fixture parses")
}

pub fn named(name: &str) -> Option<GraphFile> {
    let small = |edges: &[(usize, usize)], n: usize| {
        GraphFile::unnamed(Dag::from_edges(n, edges).expect("valid fixture"))
    };
    match name {
        "diabetes" => Some(diabetes()),
        "chain3" => Some(small(&[(0, 1), (1, 2)], 3)),
        "collider3" => Some(small(&[(0, 2), (1, 2)], 3)),
        "diamond" => Some(small(&[(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)], 4)),
        _ => None,
    }
}
