use std::fmt;

use serde::Serialize;

use crate::graph::{reachable_set, Graph, VertexSet};

use super::closure::{breaking_vertices_unchecked, is_hereditary, is_saturated, saturated_hereditary_sets};
use super::cycles::{condition_k, has_cycle};
use super::lattice::{ideal_lattice, AdmissiblePair};
use super::StructureError;

/// `E \ H`: the vertices outside `H` with every edge into `H` removed.
pub fn quotient_graph(g: &Graph, h: &VertexSet) -> Result<Graph, StructureError> {
    if !is_hereditary(g, h) {
        return Err(StructureError::NotHereditary);
    }
    if h.is_full() {
        return Err(StructureError::EmptyQuotient);
    }
    Ok(g.induced(&h.complement()))
}

/// `E_H`: the vertices of `H` with every edge they emit.
pub fn ideal_subgraph(g: &Graph, h: &VertexSet) -> Result<Graph, StructureError> {
    if !is_hereditary(g, h) {
        return Err(StructureError::NotHereditary);
    }
    let sub = g.induced(h);
    debug_assert!(h
        .iter()
        .enumerate()
        .all(|(i, v)| sub.out_degree(i) == g.out_degree(v)));
    Ok(sub)
}

/// The algebra is simple: Condition (K) holds and only the trivial pairs are admissible.
pub fn is_simple(g: &Graph) -> bool {
    condition_k(g).holds && ideal_lattice(g).len() == 2
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniqueIdealChecks {
    pub condition_k: bool,
    pub three_saturated_sets: bool,
    pub no_breaking_vertices: bool,
    /// Every nonempty hereditary set meets `H` (a consequence of the first three).
    pub hereditary_sets_meet_h: bool,
    /// At most one sink, and any sink lies in `H` (a consequence of the first three).
    pub sink_condition: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniqueIdeal {
    pub h: VertexSet,
    pub checks: UniqueIdealChecks,
}

/// Detects graphs with exactly one proper nontrivial ideal and returns its vertex set.
pub fn unique_ideal_structure(g: &Graph) -> Option<UniqueIdeal> {
    if !condition_k(g).holds {
        return None;
    }
    let sets = saturated_hereditary_sets(g);
    if sets.len() != 3 {
        return None;
    }
    let h = sets[1].clone();
    if !breaking_vertices_unchecked(g, &h).is_empty() {
        return None;
    }
    let meets = (0..g.len()).all(|x| {
        !reachable_set(g, x)
            .expect("vertex index")
            .is_disjoint(&h)
    });
    let sinks: Vec<usize> = (0..g.len()).filter(|&v| g.is_sink(v)).collect();
    let sink_condition = sinks.len() <= 1 && sinks.iter().all(|&v| h.contains(v));
    assert!(
        meets && sink_condition,
        "unique-ideal graph violates a derived structural condition"
    );
    Some(UniqueIdeal {
        h,
        checks: UniqueIdealChecks {
            condition_k: true,
            three_saturated_sets: true,
            no_breaking_vertices: true,
            hereditary_sets_meet_h: meets,
            sink_condition,
        },
    })
}

/// The maximum among proper admissible pairs, if any; `(∅, ∅)` for a simple graph.
pub fn largest_proper_ideal(g: &Graph) -> Result<Option<AdmissiblePair>, StructureError> {
    if !condition_k(g).holds {
        return Err(StructureError::ConditionKFails);
    }
    let lattice = ideal_lattice(g);
    let top = lattice.top();
    let proper: Vec<usize> = (0..lattice.len()).filter(|&i| i != top).collect();
    Ok(proper
        .iter()
        .copied()
        .find(|&i| proper.iter().all(|&j| lattice.leq(j, i)))
        .map(|i| lattice.pairs[i].clone()))
}

/// Which side of an extension is AF (`One`) or purely infinite (`Infinite`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseTag {
    OneOne,
    OneInf,
    InfOne,
    InfInf,
}

impl CaseTag {
    pub fn from_sides(ideal_infinite: bool, quotient_infinite: bool) -> Self {
        match (ideal_infinite, quotient_infinite) {
            (false, false) => CaseTag::OneOne,
            (false, true) => CaseTag::OneInf,
            (true, false) => CaseTag::InfOne,
            (true, true) => CaseTag::InfInf,
        }
    }

    pub fn ideal_infinite(self) -> bool {
        matches!(self, CaseTag::InfOne | CaseTag::InfInf)
    }

    pub fn quotient_infinite(self) -> bool {
        matches!(self, CaseTag::OneInf | CaseTag::InfInf)
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::OneOne => "[11]",
            CaseTag::OneInf => "[1inf]",
            CaseTag::InfOne => "[inf1]",
            CaseTag::InfInf => "[infinf]",
        })
    }
}

impl Serialize for CaseTag {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

pub fn case_tag(g: &Graph, h: &VertexSet) -> Result<CaseTag, StructureError> {
    if !is_hereditary(g, h) || !is_saturated(g, h) {
        return Err(StructureError::NotSaturatedHereditary);
    }
    if h.is_empty() || h.is_full() {
        return Err(StructureError::TrivialIdeal);
    }
    let ideal = g.induced(h);
    let quotient = g.induced(&h.complement());
    Ok(CaseTag::from_sides(has_cycle(&ideal), has_cycle(&quotient)))
}
