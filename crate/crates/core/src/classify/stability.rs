use std::collections::VecDeque;

use serde::Serialize;

use super::ClassifyError;
use crate::graph::{ExtNat, Graph, VertexSet};
use crate::structure::{cycle_with_entry, has_cycle, unique_ideal_structure, CycleWitness};

/// An edge `x → y` of infinite multiplicity with `x ∉ H`, followed by a path from `y` into `H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfiniteBundle {
    pub edge: (usize, usize),
    /// Vertex path starting at `edge.1` and ending at the first vertex in `H`.
    pub path: Vec<usize>,
}

impl InfiniteBundle {
    pub fn verify(&self, g: &Graph, h: &VertexSet) -> bool {
        let (x, y) = self.edge;
        let p = &self.path;
        !h.contains(x)
            && g.mult(x, y).is_infinite()
            && p.first() == Some(&y)
            && p.last().is_some_and(|&z| h.contains(z))
            && p[..p.len() - 1].iter().all(|&z| !h.contains(z))
            && p.windows(2).all(|w| g.mult(w[0], w[1]).is_positive())
    }
}

/// Why the paths leaving the complement of `H` into `H` form an infinite family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum StabilityWitness {
    /// A cycle outside `H` with an edge into `H`.
    CycleWithEntry(CycleWitness),
    /// Infinitely many parallel edges on a route into `H`.
    InfiniteBundle(InfiniteBundle),
}

impl StabilityWitness {
    pub fn verify(&self, g: &Graph, h: &VertexSet) -> bool {
        match self {
            StabilityWitness::CycleWithEntry(w) => w.verify(g, h),
            StabilityWitness::InfiniteBundle(w) => w.verify(g, h),
        }
    }
}

/// Outcome for the unique ideal of a finite graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result")]
pub enum StabilityVerdict {
    Stable {
        ideal: Vec<usize>,
        witness: StabilityWitness,
    },
    /// A nonunital AF ideal is impossible for finitely many vertices; kept for completeness.
    NonunitalAF,
}

/// Stability of the unique proper nontrivial ideal, with a re-checkable witness.
pub fn stability_of_unique_ideal(g: &Graph) -> Result<StabilityVerdict, ClassifyError> {
    let u = unique_ideal_structure(g).ok_or(ClassifyError::NoUniqueIdeal)?;
    let h = u.h;
    let quotient = g.induced(&h.complement());
    let witness = if has_cycle(&quotient) {
        StabilityWitness::CycleWithEntry(
            cycle_with_entry(g, &h).expect("the unique ideal is the largest proper one"),
        )
    } else {
        StabilityWitness::InfiniteBundle(
            infinite_bundle(g, &h).expect("an acyclic quotient with one ideal carries an infinite edge"),
        )
    };
    debug_assert!(witness.verify(g, &h));
    Ok(StabilityVerdict::Stable { ideal: h.to_vec(), witness })
}

fn infinite_bundle(g: &Graph, h: &VertexSet) -> Option<InfiniteBundle> {
    let n = g.len();
    for x in (0..n).filter(|&x| !h.contains(x)) {
        for y in 0..n {
            if *g.mult(x, y) != ExtNat::Infinite {
                continue;
            }
            if let Some(path) = path_into(g, h, y) {
                return Some(InfiniteBundle { edge: (x, y), path });
            }
        }
    }
    None
}

/// Shortest path from `y` to `H` whose interior avoids `H`.
fn path_into(g: &Graph, h: &VertexSet, y: usize) -> Option<Vec<usize>> {
    if h.contains(y) {
        return Some(vec![y]);
    }
    let n = g.len();
    let mut parent = vec![usize::MAX; n];
    let mut seen = VertexSet::empty(n);
    seen.insert(y);
    let mut queue = VecDeque::from([y]);
    while let Some(x) = queue.pop_front() {
        for z in g.successors(x) {
            if !seen.insert(z) {
                continue;
            }
            parent[z] = x;
            if h.contains(z) {
                let mut path = vec![z];
                let mut cur = z;
                while cur != y {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(z);
        }
    }
    None
}
