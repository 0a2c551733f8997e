use std::collections::VecDeque;

use serde::Serialize;

use crate::graph::{reachable_set, ExtNat, Graph, VertexSet};

use super::closure::{is_hereditary, is_saturated, saturated_hereditary_sets};
use super::StructureError;

/// Outcome of the Condition (K) test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionK {
    pub holds: bool,
    /// Number of simple cycles based at each vertex, capped at 2.
    pub simple_cycle_counts: Vec<u8>,
}

/// Whether the positive-multiplicity relation has a directed cycle.
pub fn has_cycle(g: &Graph) -> bool {
    // 0 = unvisited, 1 = on stack, 2 = done
    let n = g.len();
    let mut color = vec![0u8; n];
    for root in 0..n {
        if color[root] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(root, g.successors(root).collect())];
        color[root] = 1;
        while let Some((v, pending)) = stack.last_mut() {
            match pending.pop() {
                Some(w) => match color[w] {
                    1 => return true,
                    0 => {
                        color[w] = 1;
                        let next = g.successors(w).collect();
                        stack.push((w, next));
                    }
                    _ => {}
                },
                None => {
                    color[*v] = 2;
                    stack.pop();
                }
            }
        }
    }
    false
}

fn cap(m: &ExtNat) -> u8 {
    match m {
        ExtNat::Infinite => 2,
        ExtNat::Finite(n) => {
            if n >= &2u32.into() {
                2
            } else if n == &1u32.into() {
                1
            } else {
                0
            }
        }
    }
}

/// Simple cycles based at `v`: edge paths returning to `v` that visit `v` only at the ends.
/// Counted with edge multiplicities and capped at 2.
fn simple_cycles_at(g: &Graph, v: usize) -> u8 {
    let n = g.len();
    // Vertices other than v that lie on some v-avoiding walk from a successor of v back to v.
    let mut forward = VertexSet::empty(n);
    let mut queue: VecDeque<usize> = g.successors(v).filter(|&w| w != v).collect();
    for &w in &queue {
        forward.insert(w);
    }
    while let Some(x) = queue.pop_front() {
        for y in g.successors(x) {
            if y != v && forward.insert(y) {
                queue.push_back(y);
            }
        }
    }
    let mut backward = VertexSet::empty(n);
    let mut queue: VecDeque<usize> = g.predecessors(v).filter(|&w| w != v).collect();
    for &w in &queue {
        backward.insert(w);
    }
    while let Some(x) = queue.pop_front() {
        for y in g.predecessors(x) {
            if y != v && backward.insert(y) {
                queue.push_back(y);
            }
        }
    }
    let middle = forward.intersection(&backward);
    if has_cycle(&g.induced(&middle)) {
        return 2;
    }
    // middle is acyclic: count walks to v by memoised recursion
    let mut memo: Vec<Option<u8>> = vec![None; n];
    fn walks(g: &Graph, x: usize, v: usize, middle: &VertexSet, memo: &mut Vec<Option<u8>>) -> u8 {
        if let Some(c) = memo[x] {
            return c;
        }
        let mut total = cap(g.mult(x, v));
        for y in middle.iter() {
            let m = cap(g.mult(x, y));
            if m > 0 && total < 2 {
                total = (total + m * walks(g, y, v, middle, memo)).min(2);
            }
        }
        memo[x] = Some(total);
        total
    }
    let mut total = cap(g.mult(v, v));
    for y in middle.iter() {
        let m = cap(g.mult(v, y));
        if m > 0 && total < 2 {
            total = (total + m * walks(g, y, v, &middle, &mut memo)).min(2);
        }
    }
    total
}

/// Condition (K): no vertex is the base of exactly one simple cycle.
pub fn condition_k(g: &Graph) -> ConditionK {
    let counts: Vec<u8> = (0..g.len()).map(|v| simple_cycles_at(g, v)).collect();
    ConditionK {
        holds: counts.iter().all(|&c| c != 1),
        simple_cycle_counts: counts,
    }
}

/// A cycle outside an ideal together with an edge from its base into the ideal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleWitness {
    /// Vertex sequence with the base repeated at the end.
    pub cycle: Vec<usize>,
    pub entry_edge: (usize, usize),
}

impl CycleWitness {
    pub fn base(&self) -> usize {
        self.cycle[0]
    }

    /// Re-checks the witness against `g` and `h`, including that exactly the
    /// vertices outside `h` reach the base.
    pub fn verify(&self, g: &Graph, h: &VertexSet) -> bool {
        let c = &self.cycle;
        if c.len() < 2 || c.first() != c.last() {
            return false;
        }
        let edges_ok = c.windows(2).all(|p| g.mult(p[0], p[1]).is_positive());
        let outside = c.iter().all(|&x| !h.contains(x));
        let (s, r) = self.entry_edge;
        let entry_ok = s == self.base() && h.contains(r) && g.mult(s, r).is_positive();
        let base = self.base();
        let reach_ok = (0..g.len()).all(|x| {
            let reaches = reachable_set(g, x).map(|r| r.contains(base)).unwrap_or(false);
            reaches == !h.contains(x)
        });
        edges_ok && outside && entry_ok && reach_ok
    }
}

/// Shortest path (vertex list) from `from` to any vertex satisfying `target`, moving only
/// through vertices allowed by `allowed` (the endpoint need not be allowed).
fn shortest_path(
    g: &Graph,
    from: usize,
    allowed: impl Fn(usize) -> bool,
    target: impl Fn(usize) -> bool,
) -> Option<Vec<usize>> {
    let n = g.len();
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut seen = VertexSet::empty(n);
    seen.insert(from);
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        for y in g.successors(x) {
            if target(y) {
                let mut path = vec![y, x];
                let mut cur = x;
                while let Some(p) = parent[cur] {
                    path.push(p);
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            if !seen.insert(y) {
                continue;
            }
            parent[y] = Some(x);
            if allowed(y) {
                queue.push_back(y);
            }
        }
    }
    None
}

/// Builds a cycle in `E \ H` whose base emits an edge into `H`.
///
/// Takes the first cycle outside `H`, follows a shortest path from its base into
/// `H`, and re-bases the cycle at the last vertex of that path outside `H`.
pub fn cycle_with_entry(g: &Graph, h: &VertexSet) -> Result<CycleWitness, StructureError> {
    if !is_hereditary(g, h) || !is_saturated(g, h) {
        return Err(StructureError::NotSaturatedHereditary);
    }
    if h.is_full() {
        return Err(StructureError::EmptyQuotient);
    }
    let largest = saturated_hereditary_sets(g)
        .iter()
        .all(|k| k.is_full() || k.is_subset(h));
    if !largest {
        return Err(StructureError::Hypothesis(
            "H is not the largest proper saturated hereditary set".into(),
        ));
    }
    let outside = |x: usize| !h.contains(x);
    let alpha = (0..g.len())
        .filter(|&x| outside(x))
        .find_map(|x| {
            if g.mult(x, x).is_positive() {
                return Some(vec![x, x]);
            }
            shortest_path(g, x, outside, |y| y == x)
        })
        .ok_or_else(|| StructureError::Hypothesis("the quotient graph has no cycle".into()))?;
    let start = alpha[0];
    let mu = shortest_path(g, start, outside, |y| h.contains(y))
        .ok_or_else(|| StructureError::Hypothesis("no path from the cycle into H".into()))?;
    let last_out = mu[mu.len() - 2];
    let entry_edge = (last_out, mu[mu.len() - 1]);
    let cycle = if last_out == start {
        alpha
    } else {
        let mut nu = shortest_path(g, last_out, outside, |y| y == start).ok_or_else(|| {
            StructureError::Hypothesis("no return path to the cycle outside H".into())
        })?;
        nu.extend_from_slice(&mu[1..mu.len() - 1]);
        nu
    };
    let witness = CycleWitness { cycle, entry_edge };
    if !witness.verify(g, h) {
        return Err(StructureError::Hypothesis(
            "some vertex outside H does not reach the cycle".into(),
        ));
    }
    Ok(witness)
}
