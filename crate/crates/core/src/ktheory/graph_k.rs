use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::graph::{Graph, VertexSet};
use crate::structure::{
    breaking_vertices, condition_k, has_cycle, is_hereditary, is_simple, CaseTag,
};

use super::group::{is_exact_at, FgAbGroup, GroupHom};
use super::matrix::IntMatrix;
use super::smith::smith_normal_form;
use super::KTheoryError;

/// `B_E`: the `E⁰ × E⁰_reg` submatrix of `A_Eᵗ − I`; entry `(w, v) = A(v, w) − [v = w]`.
pub fn b_matrix(g: &Graph) -> IntMatrix {
    let n = g.len();
    let regular: Vec<usize> = (0..n).filter(|&v| g.is_regular(v)).collect();
    let mut b = IntMatrix::zeros(n, regular.len());
    for (col, &v) in regular.iter().enumerate() {
        for w in 0..n {
            let mut x = g
                .mult(v, w)
                .to_bigint()
                .expect("regular vertices emit finitely many edges");
            if v == w {
                x -= 1;
            }
            b.set(w, col, x);
        }
    }
    b
}

/// K-groups of a graph with the bookkeeping needed for induced maps.
#[derive(Clone, Debug)]
pub struct GraphK {
    /// `coker B_E`, generated by the vertices.
    pub k0: Arc<FgAbGroup>,
    /// `ker B_E` (free), generated by `k1_basis`.
    pub k1: Arc<FgAbGroup>,
    /// Regular vertices, indexing the rows of `k1_basis`.
    pub regular: Vec<usize>,
    /// Basis of `ker B_E` as columns in `Z^regular`.
    pub k1_basis: IntMatrix,
    /// Left inverse of `k1_basis` on the kernel: coordinates of a kernel vector.
    pub k1_coords: IntMatrix,
    pub b_rank: usize,
}

pub fn graph_k(g: &Graph) -> GraphK {
    let b = b_matrix(g);
    let smith = smith_normal_form(&b);
    let k1_idx: Vec<usize> = (smith.rank..b.cols()).collect();
    let k1_basis = smith.v.select_cols(&k1_idx);
    let k1_coords = smith.v_inv.select_rows(&k1_idx);
    let regular = (0..g.len()).filter(|&v| g.is_regular(v)).collect();
    GraphK {
        k0: Arc::new(FgAbGroup::from_relations(b)),
        k1: Arc::new(FgAbGroup::free(k1_idx.len())),
        regular,
        k1_basis,
        k1_coords,
        b_rank: smith.rank,
    }
}

/// `(K0, K1) = (coker B_E, ker B_E)`.
pub fn k_groups(g: &Graph) -> (FgAbGroup, FgAbGroup) {
    let k = graph_k(g);
    ((*k.k0).clone(), (*k.k1).clone())
}

/// Positivity data on a K0 group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConeTag {
    /// Every element is positive.
    Trivial,
    /// `Z^k` ordered coordinatewise in the designated basis (columns, normal coordinates).
    StandardSimplicial { rank: usize, basis: IntMatrix },
    UnknownOrder,
}

impl ConeTag {
    pub fn label(&self) -> String {
        match self {
            ConeTag::Trivial => "Trivial".into(),
            ConeTag::StandardSimplicial { rank, .. } => format!("StandardSimplicial({rank})"),
            ConeTag::UnknownOrder => "UnknownOrder".into(),
        }
    }

    /// Same kind of order on isomorphic groups (basis choice ignored).
    pub fn same_kind(&self, other: &ConeTag) -> bool {
        match (self, other) {
            (ConeTag::Trivial, ConeTag::Trivial) => true,
            (
                ConeTag::StandardSimplicial { rank: a, .. },
                ConeTag::StandardSimplicial { rank: b, .. },
            ) => a == b,
            _ => false,
        }
    }
}

impl Serialize for ConeTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ConeTag", 2)?;
        st.serialize_field("kind", &self.label())?;
        match self {
            ConeTag::StandardSimplicial { basis, .. } => st.serialize_field("basis", basis)?,
            _ => st.serialize_field("basis", &Option::<IntMatrix>::None)?,
        }
        st.end()
    }
}

/// Order on K0 of a graph algebra, as far as this crate can determine it.
///
/// A simple graph with a cycle is purely infinite. A finite acyclic row-finite graph
/// has `K0 = Z^sinks` with the positive cone spanned by the sink classes. Everything
/// else (non-simple graphs with cycles, or infinite emitters whose gap projections
/// enlarge the cone) is reported as unknown.
pub fn order_cone(g: &Graph) -> ConeTag {
    if has_cycle(g) {
        return if is_simple(g) {
            ConeTag::Trivial
        } else {
            ConeTag::UnknownOrder
        };
    }
    if (0..g.len()).any(|v| g.is_infinite_emitter(v)) {
        return ConeTag::UnknownOrder;
    }
    let k = graph_k(g);
    let sinks: Vec<usize> = (0..g.len()).filter(|&v| g.is_sink(v)).collect();
    if k.k0.free_rank() != sinks.len() || !k.k0.torsion().is_empty() {
        return ConeTag::UnknownOrder;
    }
    let n = g.len();
    let image = |v: usize| {
        let mut e = vec![BigInt::zero(); n];
        e[v] = BigInt::one();
        k.k0.to_normal(&e)
    };
    let cols: Vec<Vec<BigInt>> = sinks.iter().map(|&s| image(s)).collect();
    let basis = IntMatrix::from_columns(sinks.len(), &cols);
    if !basis.determinant().abs().is_one() {
        return ConeTag::UnknownOrder;
    }
    // every vertex class must be a nonnegative combination of the sink classes
    let smith = smith_normal_form(&basis);
    let all_positive = (0..n).all(|v| {
        smith
            .solve(&image(v))
            .is_some_and(|c| c.iter().all(|x| !x.is_negative()))
    });
    if !all_positive {
        return ConeTag::UnknownOrder;
    }
    ConeTag::StandardSimplicial {
        rank: sinks.len(),
        basis,
    }
}

/// Cone tag of K0 for a simple graph algebra.
pub fn cone_tag(g: &Graph) -> Result<ConeTag, KTheoryError> {
    if !is_simple(g) {
        return Err(KTheoryError::NotSimple);
    }
    Ok(order_cone(g))
}

fn check_ideal(g: &Graph, h: &VertexSet) -> Result<(), KTheoryError> {
    let b = breaking_vertices(g, h).map_err(|_| KTheoryError::NotSaturatedHereditary)?;
    if !b.is_empty() {
        return Err(KTheoryError::BreakingVertices(b.to_vec()));
    }
    Ok(())
}

/// The coordinate inclusion `K0(E_H) -> K0(E)` and projection `K0(E) -> K0(E \ H)`.
pub fn induced_k0_maps(g: &Graph, h: &VertexSet) -> Result<(GroupHom, GroupHom), KTheoryError> {
    check_ideal(g, h)?;
    let (ideal, alg, quot) = (
        graph_k(&g.induced(h)),
        graph_k(g),
        graph_k(&g.induced(&h.complement())),
    );
    Ok(k0_maps_from(g, h, &ideal, &alg, &quot))
}

fn k0_maps_from(g: &Graph, h: &VertexSet, ideal: &GraphK, alg: &GraphK, quot: &GraphK) -> (GroupHom, GroupHom) {
    let n = g.len();
    let inside: Vec<usize> = h.iter().collect();
    let outside: Vec<usize> = h.complement().iter().collect();
    let mut inc = IntMatrix::zeros(n, inside.len());
    for (k, &v) in inside.iter().enumerate() {
        inc.set(v, k, BigInt::one());
    }
    let mut proj = IntMatrix::zeros(outside.len(), n);
    for (k, &v) in outside.iter().enumerate() {
        proj.set(k, v, BigInt::one());
    }
    let i0 = GroupHom::new(ideal.k0.clone(), alg.k0.clone(), inc)
        .expect("vertex inclusion respects relations for a hereditary set");
    let p0 = GroupHom::new(alg.k0.clone(), quot.k0.clone(), proj)
        .expect("vertex projection respects relations for a saturated hereditary set");
    (i0, p0)
}

/// The K1 maps: restriction of the coordinate inclusion and projection to kernels.
pub fn induced_k1_map(g: &Graph, h: &VertexSet) -> Result<(GroupHom, GroupHom), KTheoryError> {
    check_ideal(g, h)?;
    let (ideal, alg, quot) = (
        graph_k(&g.induced(h)),
        graph_k(g),
        graph_k(&g.induced(&h.complement())),
    );
    k1_maps_from(h, &ideal, &alg, &quot)
}

fn k1_maps_from(
    h: &VertexSet,
    ideal: &GraphK,
    alg: &GraphK,
    quot: &GraphK,
) -> Result<(GroupHom, GroupHom), KTheoryError> {
    let inside: Vec<usize> = h.iter().collect();
    let outside: Vec<usize> = h.complement().iter().collect();
    // regular vertices of the subgraphs, translated to vertices of g
    let ideal_reg: Vec<usize> = ideal.regular.iter().map(|&i| inside[i]).collect();
    let quot_reg: Vec<usize> = quot.regular.iter().map(|&i| outside[i]).collect();
    let expected_quot: Vec<usize> = alg.regular.iter().copied().filter(|v| !h.contains(*v)).collect();
    if quot_reg != expected_quot {
        return Err(KTheoryError::RegularityMismatch);
    }
    let pos = |list: &[usize], v: usize| list.iter().position(|&x| x == v);
    let mut embed = IntMatrix::zeros(alg.regular.len(), ideal_reg.len());
    for (k, &v) in ideal_reg.iter().enumerate() {
        let row = pos(&alg.regular, v).ok_or(KTheoryError::RegularityMismatch)?;
        embed.set(row, k, BigInt::one());
    }
    let mut restrict = IntMatrix::zeros(quot_reg.len(), alg.regular.len());
    for (k, &v) in quot_reg.iter().enumerate() {
        let col = pos(&alg.regular, v).expect("checked above");
        restrict.set(k, col, BigInt::one());
    }
    let i1 = &(&alg.k1_coords * &embed) * &ideal.k1_basis;
    let p1 = &(&quot.k1_coords * &restrict) * &alg.k1_basis;
    let i1 = GroupHom::new(ideal.k1.clone(), alg.k1.clone(), i1).expect("free groups");
    let p1 = GroupHom::new(alg.k1.clone(), quot.k1.clone(), p1).expect("free groups");
    Ok((i1, p1))
}

/// A connecting map of the six-term sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConnectingMap {
    Zero,
    Unavailable,
}

/// Groups, maps and order data of the six-term exact sequence of `0 → I_H → C*(E) → C*(E)/I_H → 0`.
#[derive(Clone, Debug, Serialize)]
pub struct KSixInvariant {
    pub k0_ideal: Arc<FgAbGroup>,
    pub k0_alg: Arc<FgAbGroup>,
    pub k0_quot: Arc<FgAbGroup>,
    pub ideal_cone: ConeTag,
    pub quot_cone: ConeTag,
    pub k1_ideal: Arc<FgAbGroup>,
    pub k1_alg: Arc<FgAbGroup>,
    pub k1_quot: Arc<FgAbGroup>,
    pub i0: GroupHom,
    pub p0: GroupHom,
    pub i1: GroupHom,
    pub p1: GroupHom,
    pub exp_map: ConnectingMap,
    pub index_map: ConnectingMap,
    pub case_tag: CaseTag,
    /// The K0 row was verified exact (only attempted when the index map is zero).
    pub k0_row_exact: bool,
}

impl KSixInvariant {
    /// `i0` injective, `p0` surjective and `ker p0 = im i0`.
    pub fn verify_k0_exactness(&self) -> bool {
        self.i0.is_injective() && self.p0.is_surjective() && is_exact_at(&self.i0, &self.p0)
    }
}

/// Assembles the six-term invariant for the ideal `I_H`.
pub fn assemble_k_six(g: &Graph, h: &VertexSet) -> Result<KSixInvariant, KTheoryError> {
    if !condition_k(g).holds {
        return Err(KTheoryError::ConditionKFails);
    }
    if !is_hereditary(g, h) {
        return Err(KTheoryError::NotSaturatedHereditary);
    }
    if h.is_empty() || h.is_full() {
        return Err(KTheoryError::TrivialIdeal);
    }
    check_ideal(g, h)?;
    let ideal_graph = g.induced(h);
    let quot_graph = g.induced(&h.complement());
    let (ideal, alg, quot) = (graph_k(&ideal_graph), graph_k(g), graph_k(&quot_graph));
    let (i0, p0) = k0_maps_from(g, h, &ideal, &alg, &quot);
    let (i1, p1) = k1_maps_from(h, &ideal, &alg, &quot)?;
    let index_map = if quot.k1.is_trivial() {
        ConnectingMap::Zero
    } else {
        ConnectingMap::Unavailable
    };
    let tag = CaseTag::from_sides(has_cycle(&ideal_graph), has_cycle(&quot_graph));
    let mut inv = KSixInvariant {
        k0_ideal: ideal.k0,
        k0_alg: alg.k0,
        k0_quot: quot.k0,
        ideal_cone: order_cone(&ideal_graph),
        quot_cone: order_cone(&quot_graph),
        k1_ideal: ideal.k1,
        k1_alg: alg.k1,
        k1_quot: quot.k1,
        i0,
        p0,
        i1,
        p1,
        exp_map: ConnectingMap::Zero,
        index_map,
        case_tag: tag,
        k0_row_exact: false,
    };
    if index_map == ConnectingMap::Zero {
        if !inv.verify_k0_exactness() {
            return Err(KTheoryError::NotExact);
        }
        inv.k0_row_exact = true;
    }
    Ok(inv)
}
