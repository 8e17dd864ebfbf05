//! File formats: edge-list graphs, CSV datasets and JSON learner results.
//!
//! Graph files are line oriented:
//!
//! ```text
//! # comment
//! n 3
//! name 0 smoking
//! name 1 tar
//! 0 1
//! tar 2
//! ```
//!
//! The first non-comment line declares the vertex count. `name <idx> <str>`
//! lines give optional names; every other line is a directed edge `u v`
//! whose endpoints are indices or declared names.

use std::collections::HashMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ci::{CiError, CiStats, GaussianDataset};
use crate::graph::{Dag, GraphError};
use crate::rsl::SepSetMap;

pub const RESULT_SCHEMA: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: unknown vertex name `{name}`")]
    UnknownVertex { line: usize, name: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("dataset: {0}")]
    Dataset(#[from] CiError),
}

/// A DAG with optional vertex names.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphFile {
    pub dag: Dag,
    pub names: Option<Vec<String>>,
}

impl GraphFile {
    pub fn unnamed(dag: Dag) -> Self {
        GraphFile { dag, names: None }
    }

    /// Declared names, or `X0, X1, ...`.
    pub fn vertex_names(&self) -> Vec<String> {
        self.names
            .clone()
            .unwrap_or_else(|| (0..self.dag.n()).map(|i| format!("X{i}")).collect())
    }
}

pub fn parse_graph(text: &str) -> Result<GraphFile, IoError> {
    let mut n: Option<usize> = None;
    let mut names: Vec<Option<String>> = Vec::new();
    let mut lookup: HashMap<String, usize> = HashMap::new();
    let mut raw_edges: Vec<(usize, String, String)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let malformed = |msg: &str| IoError::Malformed {
            line,
            msg: msg.to_string(),
        };
        match (n, tokens.as_slice()) {
            (None, ["n", count]) => {
                let count = count
                    .parse::<usize>()
                    .map_err(|_| malformed("vertex count is not a non-negative integer"))?;
                n = Some(count);
                names = vec![None; count];
            }
            (None, _) => return Err(malformed("expected `n <count>` header")),
            (Some(_), ["n", ..]) => return Err(malformed("duplicate `n` header")),
            (Some(count), ["name", idx, name]) => {
                let idx = idx
                    .parse::<usize>()
                    .map_err(|_| malformed("name index is not an integer"))?;
                if idx >= count {
                    return Err(malformed("name index out of range"));
                }
                if name.parse::<usize>().is_ok() {
                    return Err(malformed("vertex names must not be integers"));
                }
                if lookup.insert(name.to_string(), idx).is_some() {
                    return Err(malformed("duplicate vertex name"));
                }
                names[idx] = Some(name.to_string());
            }
            (Some(_), ["name", ..]) => return Err(malformed("expected `name <idx> <name>`")),
            (Some(_), [u, v]) => raw_edges.push((line, u.to_string(), v.to_string())),
            (Some(_), _) => return Err(malformed("expected an edge `u v`")),
        }
    }
    let n = n.ok_or(IoError::Malformed {
        line: 0,
        msg: "missing `n <count>` header".into(),
    })?;

    let resolve = |line: usize, tok: &str| -> Result<usize, IoError> {
        match tok.parse::<usize>() {
            Ok(i) if i < n => Ok(i),
            Ok(i) => Err(IoError::Malformed {
                line,
                msg: format!("vertex {i} out of range for {n} vertices"),
            }),
            Err(_) => lookup.get(tok).copied().ok_or(IoError::UnknownVertex {
                line,
                name: tok.to_string(),
            }),
        }
    };
    let mut edges = Vec::with_capacity(raw_edges.len());
    for (line, u, v) in &raw_edges {
        edges.push((resolve(*line, u)?, resolve(*line, v)?));
    }
    let dag = Dag::from_edges(n, &edges)?;
    let names = if names.iter().any(Option::is_some) {
        Some(
            names
                .into_iter()
                .enumerate()
                .map(|(i, s)| s.unwrap_or_else(|| format!("X{i}")))
                .collect(),
        )
    } else {
        None
    };
    Ok(GraphFile { dag, names })
}

pub fn write_graph(graph: &GraphFile) -> String {
    let mut out = format!("n {}\n", graph.dag.n());
    if let Some(names) = &graph.names {
        for (i, name) in names.iter().enumerate() {
            out.push_str(&format!("name {i} {name}\n"));
        }
    }
    for (u, v) in graph.dag.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Reads a CSV dataset with a header row of variable names.
pub fn read_dataset<R: Read>(reader: R) -> Result<(Vec<String>, GaussianDataset), IoError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let names: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let mut columns = vec![Vec::new(); names.len()];
    for (row, record) in rdr.records().enumerate() {
        let record = record?;
        for (j, field) in record.iter().enumerate() {
            let v: f64 = field.trim().parse().map_err(|_| IoError::Malformed {
                line: row + 2,
                msg: format!("column {j}: `{field}` is not a number"),
            })?;
            if !v.is_finite() {
                return Err(IoError::Malformed {
                    line: row + 2,
                    msg: format!("column {j}: non-finite value"),
                });
            }
            columns[j].push(v);
        }
    }
    Ok((names, GaussianDataset::from_columns(columns)?))
}

pub fn write_dataset<W: Write>(
    writer: W,
    names: &[String],
    data: &GaussianDataset,
) -> Result<(), IoError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(names)?;
    let mut row = Vec::with_capacity(data.n_vars());
    for i in 0..data.n_samples() {
        row.clear();
        row.extend((0..data.n_vars()).map(|j| data.column(j)[i].to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsJson {
    pub total_tests: u64,
    pub dedup_hits: u64,
    pub conditioning_size_sum: u64,
    pub max_conditioning_size: u64,
    pub asc: f64,
}

impl From<CiStats> for StatsJson {
    fn from(s: CiStats) -> Self {
        StatsJson {
            total_tests: s.total_tests,
            dedup_hits: s.dedup_hits,
            conditioning_size_sum: s.conditioning_size_sum,
            max_conditioning_size: s.max_conditioning_size,
            asc: s.asc(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SepsetEntry {
    pub x: usize,
    pub y: usize,
    pub set: Vec<usize>,
}

/// JSON document written by `learn`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub schema: u32,
    pub algorithm: String,
    pub mode: String,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
    pub edges: Vec<(usize, usize)>,
    pub sepsets: Vec<SepsetEntry>,
    pub removal_order: Vec<usize>,
    pub stats: StatsJson,
    pub mb_stats: StatsJson,
    pub wall_time_secs: f64,
    pub fallback_used: bool,
    pub m_used: Option<usize>,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub mb_alpha: Option<f64>,
    #[serde(default)]
    pub seed: Option<u64>,
}

impl ResultFile {
    pub fn sepset_map(&self) -> SepSetMap {
        let mut map = SepSetMap::new();
        for e in &self.sepsets {
            map.insert(e.x, e.y, e.set.clone());
        }
        map
    }

    pub fn sepset_entries(map: &SepSetMap) -> Vec<SepsetEntry> {
        map.iter()
            .map(|((x, y), set)| SepsetEntry {
                x,
                y,
                set: set.to_vec(),
            })
            .collect()
    }
}
