use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::units::{lift_unit, unit_orbit_eq, ENUMERATION_LIMIT};
use super::ClassifyError;
use crate::graph::{ExtNat, Graph};
use crate::ktheory::{group_iso, k_groups};
use crate::structure::{condition_k, ideal_lattice};
use crate::verdict::{Obstruction, Verdict, Witness};

const CONGRUENCE: &str = "unique-ideal congruence";

/// Entries of a two-vertex vertex matrix `[[a, b], [c, d]]`, ordered so that `c ≤ b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoVertexParams {
    pub a: ExtNat,
    pub b: ExtNat,
    pub c: ExtNat,
    pub d: ExtNat,
    /// The vertices were exchanged to reach `c ≤ b`.
    pub swapped: bool,
}

impl TwoVertexParams {
    pub fn new(a: ExtNat, b: ExtNat, c: ExtNat, d: ExtNat) -> Self {
        if c > b {
            TwoVertexParams { a: d, b: c, c: b, d: a, swapped: true }
        } else {
            TwoVertexParams { a, b, c, d, swapped: false }
        }
    }

    /// Finite-entry shorthand; `None` is `∞`.
    pub fn from_u64(a: Option<u64>, b: Option<u64>, c: Option<u64>, d: Option<u64>) -> Self {
        let e = |x: Option<u64>| x.map_or(ExtNat::Infinite, ExtNat::from);
        Self::new(e(a), e(b), e(c), e(d))
    }

    pub fn from_graph(g: &Graph) -> Result<Self, ClassifyError> {
        if g.len() != 2 {
            return Err(ClassifyError::NotTwoVertex(g.len()));
        }
        Ok(Self::new(
            g.mult(0, 0).clone(),
            g.mult(0, 1).clone(),
            g.mult(1, 0).clone(),
            g.mult(1, 1).clone(),
        ))
    }

    /// The graph in the ordered presentation.
    pub fn to_graph(&self) -> Graph {
        Graph::from_matrix(vec![
            vec![self.a.clone(), self.b.clone()],
            vec![self.c.clone(), self.d.clone()],
        ])
        .expect("two-vertex matrix is valid")
    }

    /// Whether this is an upper-triangular graph with exactly one proper nontrivial ideal
    /// satisfying Condition (K): `c = 0`, `b ≥ 1`, `a, d ∉ {1}`, `a = 0 ⇒ b = ∞` and
    /// `b = ∞ ⇒ a ∈ {0, ∞}`.
    pub fn in_unique_ideal_family(&self) -> bool {
        self.family_violation().is_none()
    }

    fn family_violation(&self) -> Option<&'static str> {
        let one = ExtNat::one();
        if !self.c.is_zero() {
            Some("lower-left entry must be 0")
        } else if self.b.is_zero() {
            Some("upper-right entry must be nonzero")
        } else if self.a == one || self.d == one {
            Some("a diagonal entry equals 1")
        } else if self.a.is_zero() && !self.b.is_infinite() {
            Some("a = 0 requires b = inf")
        } else if self.b.is_infinite() && !(self.a.is_zero() || self.a.is_infinite()) {
            Some("b = inf requires a in {0, inf}")
        } else {
            None
        }
    }
}

impl fmt::Display for TwoVertexParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// `n − 1` for a finite diagonal entry `n ≥ 2`.
fn minus_one(n: &ExtNat) -> Option<BigInt> {
    n.to_bigint().filter(|x| *x >= BigInt::from(2)).map(|x| x - 1)
}

fn degenerate(n: &ExtNat) -> bool {
    n.is_zero() || n.is_infinite()
}

/// Decides stable isomorphism of two graphs in the unique-ideal two-vertex family by the
/// congruence conditions on `(a, b, d)`.
pub fn decide_unique_ideal_congruence(p: &TwoVertexParams, q: &TwoVertexParams) -> Result<Verdict, ClassifyError> {
    for x in [p, q] {
        if let Some(why) = x.family_violation() {
            return Err(ClassifyError::NotInFamily(format!("{x}: {why}")));
        }
    }
    if p.a != q.a {
        return Ok(Verdict::mismatch(CONGRUENCE, "a", &p.a, &q.a));
    }
    if p.d != q.d {
        return Ok(Verdict::mismatch(CONGRUENCE, "d", &p.d, &q.d));
    }
    if p.a.is_zero() {
        return Ok(Verdict::yes(
            format!("{CONGRUENCE}: a = 0"),
            Witness::IdentityMaps { reason: "a = 0 forces b = inf, so the graphs coincide".into() },
        ));
    }
    if p.a.is_infinite() {
        return Ok(Verdict::yes(
            format!("{CONGRUENCE}: a = inf"),
            Witness::Family {
                family: "unique ideal, a = inf".into(),
                detail: format!("quotient K0 is free, so both extensions split; d = {}", p.d),
            },
        ));
    }
    let am1 = minus_one(&p.a).expect("a finite and at least 2");
    let (b, b2) = (p.b.to_bigint().expect("b finite"), q.b.to_bigint().expect("b finite"));
    if degenerate(&p.d) {
        let route = format!("{CONGRUENCE}: d in {{0, inf}}, unit mod a - 1");
        let (ok, z) = unit_orbit_eq(&b, &b2, &am1);
        return Ok(match (ok, z) {
            (true, Some(z)) => Verdict::yes(route, Witness::Unit { modulus: am1, z }),
            _ => Verdict::no(route, Obstruction::NoUnit { modulus: am1, b, b_prime: b2 }),
        });
    }
    let dm1 = minus_one(&p.d).expect("d finite and at least 2");
    let g = am1.gcd(&dm1);
    let route = format!("{CONGRUENCE}: unit pair mod gcd(a - 1, d - 1)");
    let holds = b.gcd(&g) == b2.gcd(&g);
    let pair = unit_pair(&b, &b2, &am1, &dm1, &g);
    if let Some(found) = &pair.0 {
        assert_eq!(found.is_some(), holds, "unit-pair search disagrees with the gcd test");
    }
    let found = match pair {
        (Some(found), _) => found,
        (None, fallback) => fallback.filter(|_| holds),
    };
    Ok(match found {
        Some((z1, z2)) => Verdict::yes(route, Witness::UnitPair { modulus: g, z1, z2 }),
        None => Verdict::no(route, Obstruction::NoUnit { modulus: g, b, b_prime: b2 }),
    })
}

type UnitPair = (BigInt, BigInt);

/// Lexicographic search over units `z1 mod d − 1`, `z2 mod a − 1` for `z1·b ≡ z2·b' (mod g)`.
///
/// Returns `(Some(result), _)` when the search space is within the enumeration limit,
/// otherwise `(None, candidate)` where the candidate is built from a single unit mod `g`.
fn unit_pair(
    b: &BigInt,
    b2: &BigInt,
    am1: &BigInt,
    dm1: &BigInt,
    g: &BigInt,
) -> (Option<Option<UnitPair>>, Option<UnitPair>) {
    let size = (am1 * dm1).to_u64().filter(|&s| s <= ENUMERATION_LIMIT);
    if size.is_none() {
        let (ok, z) = unit_orbit_eq(b2, b, g);
        let cand = if ok {
            z.map(|z| (lift_unit(&z, g, dm1), BigInt::one().mod_floor(am1)))
        } else {
            None
        };
        return (None, cand);
    }
    let units = |m: &BigInt| -> Vec<BigInt> {
        let mut out = Vec::new();
        let mut z = BigInt::zero();
        while &z < m {
            if z.gcd(m).is_one() {
                out.push(z.clone());
            }
            z += 1;
        }
        out
    };
    let (u1, u2) = (units(dm1), units(am1));
    for z1 in &u1 {
        let lhs = (z1 * b).mod_floor(g);
        for z2 in &u2 {
            if (z2 * b2 - &lhs).mod_floor(g).is_zero() {
                return (Some(Some((z1.clone(), z2.clone()))), None);
            }
        }
    }
    (Some(None), None)
}

/// The five two-vertex patterns under Condition (K).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TwoVertexCase {
    /// Simple and purely infinite.
    I,
    /// Simple AF: a matrix algebra.
    II,
    /// Exactly one proper nontrivial ideal.
    III,
    /// `b = ∞` with finite `a ≥ 2`.
    IV,
    /// No edges between the vertices.
    V,
}

impl TwoVertexCase {
    pub fn detect(p: &TwoVertexParams) -> Option<Self> {
        let (a, b, c, d) = (&p.a, &p.b, &p.c, &p.d);
        let finite_pos = |x: &ExtNat| x.is_positive() && !x.is_infinite();
        if b.is_zero() && c.is_zero() {
            return Some(TwoVertexCase::V);
        }
        if b.is_positive() && c.is_positive() {
            return Some(TwoVertexCase::I);
        }
        // c = 0 < b from here
        if a.is_zero() && finite_pos(b) {
            if d.is_zero() {
                return Some(TwoVertexCase::II);
            }
            if *d != ExtNat::one() {
                return Some(TwoVertexCase::I);
            }
            return None;
        }
        if b.is_infinite() && minus_one(a).is_some() {
            return Some(TwoVertexCase::IV);
        }
        p.in_unique_ideal_family().then_some(TwoVertexCase::III)
    }

    pub fn lattice_size(self) -> usize {
        match self {
            TwoVertexCase::I | TwoVertexCase::II => 2,
            TwoVertexCase::III => 3,
            TwoVertexCase::IV | TwoVertexCase::V => 4,
        }
    }
}

impl fmt::Display for TwoVertexCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TwoVertexCase::I => "(i)",
            TwoVertexCase::II => "(ii)",
            TwoVertexCase::III => "(iii)",
            TwoVertexCase::IV => "(iv)",
            TwoVertexCase::V => "(v)",
        })
    }
}

/// Decides stable isomorphism of two two-vertex graphs satisfying Condition (K).
pub fn decide_two_vertex(g: &Graph, h: &Graph) -> Result<Verdict, ClassifyError> {
    let p = TwoVertexParams::from_graph(g)?;
    let q = TwoVertexParams::from_graph(h)?;
    if !condition_k(g).holds || !condition_k(h).holds {
        return Err(ClassifyError::ConditionKFails);
    }
    let mut cases = Vec::with_capacity(2);
    for (x, graph) in [(&p, g), (&q, h)] {
        let Some(case) = TwoVertexCase::detect(x) else {
            return Ok(Verdict::unknown(format!("two-vertex: {x} matches no pattern")));
        };
        let size = ideal_lattice(graph).len();
        if size != case.lattice_size() {
            return Ok(Verdict::unknown(format!(
                "two-vertex: input anomaly, {x} matches case {case} but has {size} ideals"
            )));
        }
        cases.push(case);
    }
    let (cp, cq) = (cases[0], cases[1]);
    let mut v = decide_in_case(&p, &q, g, h, cp, cq)?;
    for (x, side) in [(&p, "first"), (&q, "second")] {
        if x.swapped {
            v = v.with_note(format!("{side} graph: vertices swapped to order c <= b"));
        }
    }
    Ok(v)
}

fn decide_in_case(
    p: &TwoVertexParams,
    q: &TwoVertexParams,
    g: &Graph,
    h: &Graph,
    cp: TwoVertexCase,
    cq: TwoVertexCase,
) -> Result<Verdict, ClassifyError> {
    if cp != cq {
        return Ok(Verdict::mismatch("two-vertex", "case", cp, cq));
    }
    let route = format!("two-vertex case {cp}");
    Ok(match cp {
        TwoVertexCase::I => {
            let ((k0, k1), (l0, l1)) = (k_groups(g), k_groups(h));
            if !group_iso(&k0, &l0) {
                Verdict::mismatch(route, "K0 = coker", &k0, &l0)
            } else if !group_iso(&k1, &l1) {
                Verdict::mismatch(route, "K1 = ker", &k1, &l1)
            } else {
                Verdict::yes(
                    route,
                    Witness::Family {
                        family: "simple purely infinite".into(),
                        detail: format!("K0 = {k0}, K1 = {k1} on both sides"),
                    },
                )
            }
        }
        TwoVertexCase::II => Verdict::yes(
            route,
            Witness::Family {
                family: "simple AF matrix algebra".into(),
                detail: format!("b = {}, b' = {}; both stabilize to the compacts", p.b, q.b),
            },
        ),
        TwoVertexCase::III => decide_unique_ideal_congruence(p, q)?.via(&route),
        TwoVertexCase::IV => {
            if p.a != q.a {
                Verdict::mismatch(route, "a", &p.a, &q.a)
            } else if p.d != q.d {
                Verdict::mismatch(route, "d", &p.d, &q.d)
            } else {
                Verdict::yes(
                    route,
                    Witness::Family {
                        family: "b = inf, finite a".into(),
                        detail: format!("a = {}, d = {} on both sides", p.a, p.d),
                    },
                )
            }
        }
        TwoVertexCase::V => {
            let mut s = [p.a.clone(), p.d.clone()];
            let mut t = [q.a.clone(), q.d.clone()];
            s.sort();
            t.sort();
            if s == t {
                Verdict::yes(
                    route,
                    Witness::Family {
                        family: "two disjoint vertices".into(),
                        detail: format!("loop counts {{{}, {}}} on both sides", s[0], s[1]),
                    },
                )
            } else {
                Verdict::mismatch(
                    route,
                    "loop multiset",
                    format!("{{{}, {}}}", s[0], s[1]),
                    format!("{{{}, {}}}", t[0], t[1]),
                )
            }
        }
    })
}
