use itertools::Itertools;

use super::two_vertex::decide_two_vertex;
use crate::graph::{Graph, VertexSet};
use crate::ktheory::{assemble_k_six, group_iso, k_groups, order_cone, ConeTag, ConnectingMap, KSixInvariant, OrderedSes, ses_isomorphic};
use crate::structure::{
    breaking_vertices, case_tag, condition_k, has_cycle, ideal_lattice, largest_proper_ideal,
    unique_ideal_structure, CaseTag,
};
use crate::verdict::{Verdict, Witness};

/// Graphs up to this size are searched exhaustively for an explicit isomorphism.
const ISOMORPHISM_SEARCH_LIMIT: usize = 8;

/// Tri-valued stable-isomorphism decision for two finite graphs.
///
/// Dispatches to the two-vertex classification, the unique-ideal invariant, the
/// largest-AF-ideal invariant or the simple-algebra comparison, and answers `Unknown`
/// with the reason when none of them applies.
pub fn decide_pair(g: &Graph, h: &Graph) -> Verdict {
    if !condition_k(g).holds || !condition_k(h).holds {
        return Verdict::unknown("Condition (K) fails: not every ideal is gauge invariant");
    }
    if g.len() == 2 && h.len() == 2 {
        return match decide_two_vertex(g, h) {
            Ok(v) => v,
            Err(e) => Verdict::unknown(format!("two-vertex: {e}")),
        };
    }
    let (lg, lh) = (ideal_lattice(g).len(), ideal_lattice(h).len());
    if lg != lh {
        return Verdict::mismatch("ideal lattice", "number of ideals", lg, lh);
    }
    match lg {
        2 => decide_simple(g, h),
        3 if unique_ideal_structure(g).is_some() && unique_ideal_structure(h).is_some() => {
            decide_unique_ideal(g, h)
        }
        _ => decide_largest_af_ideal(g, h),
    }
}

/// Both algebras simple: purely infinite ones are compared by `(K0, K1)`, and graphs
/// whose only ideal structure is a single sink give the compacts.
pub fn decide_simple(g: &Graph, h: &Graph) -> Verdict {
    const ROUTE: &str = "simple";
    let (cg, ch) = (has_cycle(g), has_cycle(h));
    if cg && ch {
        let ((k0, k1), (l0, l1)) = (k_groups(g), k_groups(h));
        return if !group_iso(&k0, &l0) {
            Verdict::mismatch(ROUTE, "K0", &k0, &l0)
        } else if !group_iso(&k1, &l1) {
            Verdict::mismatch(ROUTE, "K1", &k1, &l1)
        } else {
            Verdict::yes(
                format!("{ROUTE}: purely infinite"),
                Witness::Family {
                    family: "simple purely infinite".into(),
                    detail: format!("K0 = {k0}, K1 = {k1} on both sides"),
                },
            )
        };
    }
    if cg != ch {
        return Verdict::mismatch(ROUTE, "purely infinite", cg, ch);
    }
    let single_sink = |x: &Graph| matches!(order_cone(x), ConeTag::StandardSimplicial { rank: 1, .. });
    if single_sink(g) && single_sink(h) {
        return Verdict::yes(
            format!("{ROUTE}: single sink"),
            Witness::Family {
                family: "simple AF with one sink".into(),
                detail: "both algebras stabilize to the compacts".into(),
            },
        );
    }
    Verdict::unknown(format!("{ROUTE}: AF order data beyond a single sink is not computed"))
}

/// Both graphs have exactly one proper nontrivial ideal: compare the six-term invariants.
pub fn decide_unique_ideal(g: &Graph, h: &Graph) -> Verdict {
    const ROUTE: &str = "unique ideal";
    let (Some(ug), Some(uh)) = (unique_ideal_structure(g), unique_ideal_structure(h)) else {
        return Verdict::unknown(format!("{ROUTE}: a graph does not have exactly one ideal"));
    };
    let (tg, th) = match (case_tag(g, &ug.h), case_tag(h, &uh.h)) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) => return Verdict::unknown(format!("{ROUTE}: {e}")),
    };
    if tg != th {
        return Verdict::mismatch(ROUTE, "case tag", tg, th);
    }
    let route = format!("{ROUTE} {tg}");
    let v = compare_k_six(g, &ug.h, h, &uh.h, &route, false);
    if tg != CaseTag::OneOne || !v.is_yes() {
        return v;
    }
    // the K0 data leave the order on the middle group undecided in this case
    match find_graph_isomorphism(g, h) {
        Some(permutation) => Verdict::yes(
            format!("{route}: graph isomorphism"),
            Witness::GraphIsomorphism { permutation },
        ),
        None => Verdict::unknown(format!(
            "{route}: K0 sequences agree but the order on the middle group is not compared"
        )),
    }
}

/// Both graphs have a largest proper ideal that is AF with a purely infinite quotient.
pub fn decide_largest_af_ideal(g: &Graph, h: &Graph) -> Verdict {
    const ROUTE: &str = "largest AF ideal";
    let mut ideals = Vec::with_capacity(2);
    for (x, side) in [(g, "first"), (h, "second")] {
        match largest_af_ideal(x) {
            Ok(set) => ideals.push(set),
            Err(why) => return Verdict::unknown(format!("{ROUTE}: {side} graph: {why}")),
        }
    }
    compare_k_six(g, &ideals[0], h, &ideals[1], ROUTE, true)
}

fn largest_af_ideal(g: &Graph) -> Result<VertexSet, String> {
    let pair = match largest_proper_ideal(g) {
        Ok(Some(p)) => p,
        Ok(None) => return Err("no largest proper ideal".into()),
        Err(e) => return Err(e.to_string()),
    };
    if pair.h.is_empty() {
        return Err("the largest proper ideal is zero".into());
    }
    if !pair.s.is_empty() {
        return Err("the largest proper ideal involves breaking vertices".into());
    }
    match breaking_vertices(g, &pair.h) {
        Ok(b) if b.is_empty() => {}
        Ok(b) => {
            return Err(format!(
                "breaking vertices {:?} present; desingularization is out of scope",
                b.to_vec()
            ))
        }
        Err(e) => return Err(e.to_string()),
    }
    if has_cycle(&g.induced(&pair.h)) {
        return Err("the largest proper ideal is not AF".into());
    }
    if !has_cycle(&g.induced(&pair.h.complement())) {
        return Err("the quotient is AF, so the algebra is AF and its order is not computed".into());
    }
    Ok(pair.h)
}

fn compare_k_six(g: &Graph, hg: &VertexSet, h: &Graph, hh: &VertexSet, route: &str, drop_quot_order: bool) -> Verdict {
    let (kg, kh) = match (assemble_k_six(g, hg), assemble_k_six(h, hh)) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) => return Verdict::unknown(format!("{route}: {e}")),
    };
    if kg.index_map == ConnectingMap::Unavailable || kh.index_map == ConnectingMap::Unavailable {
        return Verdict::unknown(format!("{route}: K1 of the quotient is nonzero and the index map is not computed"));
    }
    for (name, x, y) in [
        ("ideal K1", &kg.k1_ideal, &kh.k1_ideal),
        ("middle K1", &kg.k1_alg, &kh.k1_alg),
        ("quotient K1", &kg.k1_quot, &kh.k1_quot),
    ] {
        if !group_iso(x, y) {
            return Verdict::mismatch(route, name, x, y);
        }
    }
    let (s, t) = match (ordered(&kg, drop_quot_order), ordered(&kh, drop_quot_order)) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) => return Verdict::unknown(format!("{route}: {e}")),
    };
    ses_isomorphic(&s, &t).via(route)
}

fn ordered(k: &KSixInvariant, drop_quot_order: bool) -> Result<OrderedSes, crate::ktheory::KTheoryError> {
    let mut s = OrderedSes::from_k_six(k)?;
    if drop_quot_order {
        // purely infinite simple quotient: every element is positive
        s.quot_cone = ConeTag::Trivial;
    }
    Ok(s)
}

/// A vertex bijection `p` with `mult(v, w) = mult'(p[v], p[w])`, for graphs of at most
/// eight vertices.
pub fn find_graph_isomorphism(g: &Graph, h: &Graph) -> Option<Vec<usize>> {
    let n = g.len();
    if n != h.len() || n > ISOMORPHISM_SEARCH_LIMIT {
        return None;
    }
    (0..n).permutations(n).find(|p| {
        (0..n).all(|v| (0..n).all(|w| g.mult(v, w) == h.mult(p[v], p[w])))
    })
}
