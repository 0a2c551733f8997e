use std::collections::{HashSet, VecDeque};

use crate::graph::{reachable_set, ExtNat, Graph, VertexSet};

use super::StructureError;

pub fn is_hereditary(g: &Graph, x: &VertexSet) -> bool {
    x.iter().all(|v| g.successors(v).all(|w| x.contains(w)))
}

/// No regular vertex outside `x` has all of its edges landing in `x`.
pub fn is_saturated(g: &Graph, x: &VertexSet) -> bool {
    (0..g.len())
        .filter(|&v| !x.contains(v) && g.is_regular(v))
        .all(|v| g.successors(v).any(|w| !x.contains(w)))
}

/// Smallest hereditary superset of `x`.
pub fn hereditary_closure(g: &Graph, x: &VertexSet) -> VertexSet {
    let mut out = VertexSet::empty(g.len());
    for v in x.iter() {
        if !out.contains(v) {
            out.union_with(&reachable_set(g, v).expect("member of the graph"));
        }
    }
    out
}

/// Smallest saturated hereditary superset of a hereditary set.
pub fn saturate(g: &Graph, x: &VertexSet) -> Result<VertexSet, StructureError> {
    if !is_hereditary(g, x) {
        return Err(StructureError::NotHereditary);
    }
    Ok(saturate_unchecked(g, x.clone()))
}

pub(crate) fn saturate_unchecked(g: &Graph, mut x: VertexSet) -> VertexSet {
    loop {
        let forced: Vec<usize> = (0..g.len())
            .filter(|&v| !x.contains(v) && g.is_regular(v))
            .filter(|&v| g.successors(v).all(|w| x.contains(w)))
            .collect();
        if forced.is_empty() {
            return x;
        }
        for v in forced {
            x.insert(v);
        }
    }
}

/// All saturated hereditary sets in canonical order (size, then lexicographic).
///
/// Every such set is a join of saturated closures of single vertices, so a
/// search from the empty set that repeatedly joins one more vertex finds all of
/// them without visiting the full power set.
pub fn saturated_hereditary_sets(g: &Graph) -> Vec<VertexSet> {
    let n = g.len();
    let reach: Vec<VertexSet> = (0..n)
        .map(|v| reachable_set(g, v).expect("vertex index"))
        .collect();
    let start = VertexSet::empty(n);
    let mut seen: HashSet<VertexSet> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        for v in 0..n {
            if s.contains(v) {
                continue;
            }
            let joined = saturate_unchecked(g, s.union(&reach[v]));
            if seen.insert(joined.clone()) {
                queue.push_back(joined);
            }
        }
    }
    let mut sets: Vec<VertexSet> = seen.into_iter().collect();
    sets.sort();
    sets
}

/// `B_H`: infinite emitters with finitely many, but at least one, edges leaving `H`.
pub fn breaking_vertices(g: &Graph, h: &VertexSet) -> Result<VertexSet, StructureError> {
    if !is_hereditary(g, h) || !is_saturated(g, h) {
        return Err(StructureError::NotSaturatedHereditary);
    }
    Ok(breaking_vertices_unchecked(g, h))
}

pub(crate) fn breaking_vertices_unchecked(g: &Graph, h: &VertexSet) -> VertexSet {
    let n = g.len();
    VertexSet::from_indices(
        n,
        (0..n).filter(|&v| {
            if !g.is_infinite_emitter(v) {
                return false;
            }
            let escape: ExtNat = (0..n)
                .filter(|&w| !h.contains(w))
                .map(|w| g.mult(v, w).clone())
                .sum();
            escape.is_positive() && !escape.is_infinite()
        }),
    )
}
