//! Finite directed graphs with extended-natural edge multiplicities.
//!
//! Edges are never named individually: a [`Graph`] is a vertex list together
//! with the full multiplicity table `mult(v, w)`. The declaration order of the
//! vertices is the canonical order used by every matrix and enumeration.

mod extnat;
mod parse;
mod vertex_set;

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

pub use extnat::{ExtNat, ParseExtNatError};
pub use parse::{parse_graph, parse_matrix_shorthand};
pub use vertex_set::VertexSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("line {line}: malformed line: {text:?}")]
    Malformed { line: usize, text: String },
    #[error("line {line}: duplicate vertex {name:?}")]
    DuplicateVertex { line: usize, name: String },
    #[error("line {line}: `vertices:` declared more than once")]
    DuplicateDeclaration { line: usize },
    #[error("line {line}: edge references undeclared vertex {name:?}")]
    UndeclaredVertex { line: usize, name: String },
    #[error("line {line}: edge line before the `vertices:` declaration")]
    EdgeBeforeVertices { line: usize },
    #[error("line {line}: negative multiplicity {text:?}")]
    NegativeMultiplicity { line: usize, text: String },
    #[error("line {line}: invalid multiplicity {text:?} (expected an integer >= 1 or `inf`)")]
    InvalidMultiplicity { line: usize, text: String },
    #[error("line {line}: repeated edge line for {src} -> {dst}")]
    RepeatedEdge { line: usize, src: String, dst: String },
    #[error("missing `vertices:` declaration")]
    MissingVertices,
    #[error("a graph needs at least one vertex")]
    NoVertices,
    #[error("matrix is not square ({rows} rows, row {row} has {len} entries)")]
    NotSquare { rows: usize, row: usize, len: usize },
    #[error("invalid matrix entry {0:?}")]
    MatrixEntry(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("vertex index {0} out of range")]
    IndexOutOfRange(usize),
}

/// A finite directed graph given by its multiplicity table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    mult: Vec<ExtNat>,
}

impl Graph {
    /// Builds a graph from names and a square multiplicity table in the same order.
    pub fn new(names: Vec<String>, rows: Vec<Vec<ExtNat>>) -> Result<Self, GraphError> {
        if names.is_empty() {
            return Err(GraphError::NoVertices);
        }
        let n = names.len();
        let mut seen = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if seen.insert(name.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex {
                    line: 0,
                    name: name.clone(),
                });
            }
        }
        if rows.len() != n {
            return Err(GraphError::NotSquare {
                rows: rows.len(),
                row: 0,
                len: n,
            });
        }
        let mut mult = Vec::with_capacity(n * n);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(GraphError::NotSquare {
                    rows: n,
                    row: r,
                    len: row.len(),
                });
            }
            mult.extend(row);
        }
        Ok(Graph { names, mult })
    }

    /// Graph with default vertex names: `v, w` for two vertices, `v0, v1, ...` otherwise.
    pub fn from_matrix(rows: Vec<Vec<ExtNat>>) -> Result<Self, GraphError> {
        let names = default_names(rows.len());
        Graph::new(names, rows)
    }

    /// Convenience constructor for tests and examples; `None` stands for `∞`.
    pub fn from_u64_matrix(rows: &[&[Option<u64>]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| e.map_or(ExtNat::Infinite, ExtNat::from))
                    .collect()
            })
            .collect();
        Graph::from_matrix(rows).expect("well-formed matrix")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Result<usize, GraphError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    /// Resolves a list of vertex names into a [`VertexSet`].
    pub fn vertex_set(&self, names: &[&str]) -> Result<VertexSet, GraphError> {
        let mut set = VertexSet::empty(self.len());
        for name in names {
            set.insert(self.index_of(name)?);
        }
        Ok(set)
    }

    pub fn mult(&self, v: usize, w: usize) -> &ExtNat {
        &self.mult[v * self.len() + w]
    }

    pub fn row(&self, v: usize) -> &[ExtNat] {
        let n = self.len();
        &self.mult[v * n..(v + 1) * n]
    }

    pub fn out_degree(&self, v: usize) -> ExtNat {
        self.row(v).iter().cloned().sum()
    }

    /// Vertices `w` with `mult(v, w) >= 1`, in canonical order.
    pub fn successors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(v)
            .iter()
            .enumerate()
            .filter(|(_, m)| m.is_positive())
            .map(|(w, _)| w)
    }

    pub fn predecessors(&self, w: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&v| self.mult(v, w).is_positive())
    }

    pub fn is_sink(&self, v: usize) -> bool {
        self.row(v).iter().all(ExtNat::is_zero)
    }

    pub fn is_infinite_emitter(&self, v: usize) -> bool {
        self.row(v).iter().any(ExtNat::is_infinite)
    }

    pub fn is_regular(&self, v: usize) -> bool {
        !self.is_sink(v) && !self.is_infinite_emitter(v)
    }

    /// Full subgraph on `keep` (in canonical order), keeping every edge between kept vertices.
    pub fn induced(&self, keep: &VertexSet) -> Graph {
        let idx: Vec<usize> = keep.iter().collect();
        let names = idx.iter().map(|&i| self.names[i].clone()).collect();
        let mut mult = Vec::with_capacity(idx.len() * idx.len());
        for &v in &idx {
            for &w in &idx {
                mult.push(self.mult(v, w).clone());
            }
        }
        Graph { names, mult }
    }

    /// Renders the graph in the line-oriented text format accepted by [`parse_graph`].
    pub fn to_text(&self) -> String {
        let mut out = String::from("vertices:");
        for name in &self.names {
            out.push(' ');
            out.push_str(name);
        }
        out.push('\n');
        for v in 0..self.len() {
            for w in 0..self.len() {
                let m = self.mult(v, w);
                if m.is_positive() {
                    let _ = writeln!(out, "edge {} {} {}", self.names[v], self.names[w], m);
                }
            }
        }
        out
    }
}

pub(crate) fn default_names(n: usize) -> Vec<String> {
    if n == 2 {
        vec!["v".to_string(), "w".to_string()]
    } else {
        (0..n).map(|i| format!("v{i}")).collect()
    }
}

/// The vertex matrix `A_E` in canonical vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexMatrix {
    pub entries: Vec<Vec<ExtNat>>,
}

pub fn vertex_matrix(g: &Graph) -> VertexMatrix {
    VertexMatrix {
        entries: (0..g.len()).map(|v| g.row(v).to_vec()).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexClassification {
    pub sinks: VertexSet,
    pub infinite_emitters: VertexSet,
    pub regular: VertexSet,
    pub singular: VertexSet,
    pub row_finite: bool,
}

pub fn classify_vertices(g: &Graph) -> VertexClassification {
    let n = g.len();
    let sinks = VertexSet::from_indices(n, (0..n).filter(|&v| g.is_sink(v)));
    let infinite_emitters =
        VertexSet::from_indices(n, (0..n).filter(|&v| g.is_infinite_emitter(v)));
    let singular = sinks.union(&infinite_emitters);
    let regular = singular.complement();
    let row_finite = infinite_emitters.is_empty();
    VertexClassification {
        sinks,
        infinite_emitters,
        regular,
        singular,
        row_finite,
    }
}

fn check_index(g: &Graph, v: usize) -> Result<(), GraphError> {
    if v < g.len() {
        Ok(())
    } else {
        Err(GraphError::IndexOutOfRange(v))
    }
}

/// `{w : v >= w}`, including `v` itself.
pub fn reachable_set(g: &Graph, v: usize) -> Result<VertexSet, GraphError> {
    check_index(g, v)?;
    Ok(bfs(g.len(), v, |x| g.successors(x).collect()))
}

/// `L(v) = {w : w >= v}`, including `v` itself.
pub fn predecessor_set(g: &Graph, v: usize) -> Result<VertexSet, GraphError> {
    check_index(g, v)?;
    Ok(bfs(g.len(), v, |x| g.predecessors(x).collect()))
}

/// A vertex is left infinite when `L(v)` is infinite; never the case for a finite graph.
pub fn is_left_infinite(g: &Graph, v: usize) -> Result<bool, GraphError> {
    let preds = predecessor_set(g, v)?;
    Ok(preds.len() > g.len())
}

fn bfs(n: usize, start: usize, next: impl Fn(usize) -> Vec<usize>) -> VertexSet {
    let mut seen = VertexSet::empty(n);
    seen.insert(start);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for y in next(x) {
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    seen
}
