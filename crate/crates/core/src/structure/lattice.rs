use serde::Serialize;

use crate::graph::{Graph, VertexSet};

use super::closure::{breaking_vertices_unchecked, saturated_hereditary_sets};

/// A saturated hereditary set `h` together with a subset `s` of its breaking vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdmissiblePair {
    pub h: VertexSet,
    pub s: VertexSet,
}

impl AdmissiblePair {
    /// `(H, S) <= (H', S')` iff `H ⊆ H'` and `S ⊆ H' ∪ S'`.
    pub fn leq(&self, other: &AdmissiblePair) -> bool {
        self.h.is_subset(&other.h) && self.s.is_subset(&other.h.union(&other.s))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealLattice {
    pub pairs: Vec<AdmissiblePair>,
    /// `order[i][j]` is `pairs[i] <= pairs[j]`.
    pub order: Vec<Vec<bool>>,
}

impl IdealLattice {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.order[i][j]
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.pairs
            .iter()
            .position(|p| p.h.is_full())
            .expect("all vertices form an admissible pair")
    }

    /// Index of the pair `(h, s)`, if present.
    pub fn position(&self, h: &VertexSet, s: &VertexSet) -> Option<usize> {
        self.pairs.iter().position(|p| &p.h == h && &p.s == s)
    }

    /// Checks reflexivity, antisymmetry, transitivity and the bottom/top elements.
    pub fn verify_partial_order(&self) -> bool {
        let n = self.len();
        let reflexive = (0..n).all(|i| self.order[i][i]);
        let antisymmetric = (0..n)
            .all(|i| (0..n).all(|j| i == j || !(self.order[i][j] && self.order[j][i])));
        let transitive = (0..n).all(|i| {
            (0..n).all(|j| !self.order[i][j] || (0..n).all(|k| !self.order[j][k] || self.order[i][k]))
        });
        let bottom = self.pairs[0].h.is_empty()
            && self.pairs[0].s.is_empty()
            && (0..n).all(|j| self.order[0][j]);
        let top = self.top();
        let top_ok = self.pairs[top].s.is_empty() && (0..n).all(|i| self.order[i][top]);
        reflexive && antisymmetric && transitive && bottom && top_ok
    }
}

impl Serialize for AdmissiblePair {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("AdmissiblePair", 2)?;
        st.serialize_field("h", &self.h.to_vec())?;
        st.serialize_field("s", &self.s.to_vec())?;
        st.end()
    }
}

/// All admissible pairs, ordered by `H` (canonical order) and then by `S`.
pub fn ideal_lattice(g: &Graph) -> IdealLattice {
    let n = g.len();
    let mut pairs = Vec::new();
    for h in saturated_hereditary_sets(g) {
        let breaking = breaking_vertices_unchecked(g, &h).to_vec();
        let mut subsets: Vec<VertexSet> = (0u64..1 << breaking.len())
            .map(|mask| {
                VertexSet::from_indices(
                    n,
                    breaking
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, &v)| v),
                )
            })
            .collect();
        subsets.sort();
        pairs.extend(subsets.into_iter().map(|s| AdmissiblePair { h: h.clone(), s }));
    }
    let order = pairs
        .iter()
        .map(|p| pairs.iter().map(|q| p.leq(q)).collect())
        .collect();
    IdealLattice { pairs, order }
}
