use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::verdict::{Obstruction, Verdict, Witness};

use super::graph_k::{ConeTag, KSixInvariant};
use super::group::{group_iso, is_exact_at, FgAbGroup, GroupHom};
use super::matrix::{BigIntSeq, IntMatrix};
use super::smith::smith_normal_form;
use super::KTheoryError;

/// Largest `|Ext(A, B)|` for which orbits are enumerated.
pub const EXT_ORDER_LIMIT: u64 = 1_000_000;

/// Largest cyclic factor whose unit group is enumerated.
const UNIT_LIMIT: u64 = 1_000_000;

/// `0 → B --i--> M --p--> A → 0`, exactness checked on construction.
#[derive(Clone, Debug, Serialize)]
pub struct ShortExactSequence {
    i: GroupHom,
    p: GroupHom,
}

impl ShortExactSequence {
    pub fn new(i: GroupHom, p: GroupHom) -> Result<Self, KTheoryError> {
        if *i.target() != *p.source() {
            return Err(KTheoryError::NotExact);
        }
        if !(i.is_injective() && p.is_surjective() && is_exact_at(&i, &p)) {
            return Err(KTheoryError::NotExact);
        }
        Ok(ShortExactSequence { i, p })
    }

    /// `0 → B → B ⊕ A → A → 0` with the canonical maps.
    pub fn split(b: Arc<FgAbGroup>, a: Arc<FgAbGroup>) -> Self {
        let (gb, ga) = (b.generators(), a.generators());
        let (rb, ra) = (b.relations().cols(), a.relations().cols());
        let mut rel = IntMatrix::zeros(gb + ga, rb + ra);
        for r in 0..gb {
            for c in 0..rb {
                rel.set(r, c, b.relations().get(r, c).clone());
            }
        }
        for r in 0..ga {
            for c in 0..ra {
                rel.set(gb + r, rb + c, a.relations().get(r, c).clone());
            }
        }
        let m = Arc::new(FgAbGroup::from_relations(rel));
        let mut inc = IntMatrix::zeros(gb + ga, gb);
        for r in 0..gb {
            inc.set(r, r, BigInt::one());
        }
        let mut proj = IntMatrix::zeros(ga, gb + ga);
        for r in 0..ga {
            proj.set(r, gb + r, BigInt::one());
        }
        ShortExactSequence {
            i: GroupHom::new(b, m.clone(), inc).expect("block inclusion"),
            p: GroupHom::new(m, a, proj).expect("block projection"),
        }
    }

    pub fn inclusion(&self) -> &GroupHom {
        &self.i
    }

    pub fn projection(&self) -> &GroupHom {
        &self.p
    }

    pub fn sub(&self) -> &Arc<FgAbGroup> {
        self.i.source()
    }

    pub fn middle(&self) -> &Arc<FgAbGroup> {
        self.i.target()
    }

    pub fn quot(&self) -> &Arc<FgAbGroup> {
        self.p.target()
    }
}

/// A short exact sequence with order data on its outer groups.
#[derive(Clone, Debug, Serialize)]
pub struct OrderedSes {
    pub ses: ShortExactSequence,
    pub sub_cone: ConeTag,
    pub quot_cone: ConeTag,
}

impl OrderedSes {
    /// The K0 row of a six-term invariant with the ideal and quotient cones.
    pub fn from_k_six(inv: &KSixInvariant) -> Result<Self, KTheoryError> {
        Ok(OrderedSes {
            ses: ShortExactSequence::new(inv.i0.clone(), inv.p0.clone())?,
            sub_cone: inv.ideal_cone.clone(),
            quot_cone: inv.quot_cone.clone(),
        })
    }
}

fn ser_seq<S: serde::Serializer>(x: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    BigIntSeq(x).serialize(s)
}

/// An element of `Ext(A, B) = ⊕_j B / n_j B`, one block per torsion factor `n_j` of `A`.
///
/// Block `j` holds normal coordinates of `B`, reduced modulo `gcd(d, n_j)` for a
/// factor `Z_d` of `B` and modulo `n_j` for a free coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ExtClass {
    #[serde(serialize_with = "ser_seq")]
    pub quot_orders: Vec<BigInt>,
    #[serde(serialize_with = "ser_seq")]
    pub moduli: Vec<BigInt>,
    #[serde(serialize_with = "ser_seq")]
    pub coords: Vec<BigInt>,
}

impl ExtClass {
    pub fn ambient_order(&self) -> BigInt {
        self.moduli.iter().product()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Block of coordinates belonging to the `j`-th torsion factor of `A`.
    pub fn block(&self, j: usize) -> &[BigInt] {
        let d = self.moduli.len() / self.quot_orders.len().max(1);
        &self.coords[j * d..(j + 1) * d]
    }
}

struct Ambient {
    a_free: usize,
    a_orders: Vec<BigInt>,
    b_dim: usize,
    moduli: Vec<BigInt>,
}

impl Ambient {
    fn new(b: &FgAbGroup, a: &FgAbGroup) -> Self {
        let a_orders = a.torsion().to_vec();
        let b_dim = b.normal_dim();
        let mut moduli = Vec::with_capacity(a_orders.len() * b_dim);
        for n in &a_orders {
            for q in 0..b_dim {
                moduli.push(b.modulus(q).gcd(n));
            }
        }
        Ambient {
            a_free: a.free_rank(),
            a_orders,
            b_dim,
            moduli,
        }
    }

    fn order(&self) -> BigInt {
        self.moduli.iter().product()
    }

    fn reduce(&self, x: &mut [BigInt]) {
        for (xi, m) in x.iter_mut().zip(&self.moduli) {
            *xi = xi.mod_floor(m);
        }
    }

    fn class(&self, mut coords: Vec<BigInt>) -> ExtClass {
        self.reduce(&mut coords);
        ExtClass {
            quot_orders: self.a_orders.clone(),
            moduli: self.moduli.clone(),
            coords,
        }
    }

    /// `α_*`: apply an endomorphism of `B` (normal matrix) blockwise.
    fn push(&self, alpha: &IntMatrix, x: &[BigInt]) -> Vec<BigInt> {
        let mut out = Vec::with_capacity(x.len());
        for block in x.chunks(self.b_dim) {
            out.extend(alpha.mul_vec(block));
        }
        self.reduce(&mut out);
        out
    }

    /// `γ^*`: pull back along an endomorphism of `A` (normal matrix).
    fn pull(&self, gamma: &IntMatrix, x: &[BigInt]) -> Vec<BigInt> {
        let (t, f, d) = (self.a_orders.len(), self.a_free, self.b_dim);
        let mut out = vec![BigInt::zero(); t * d];
        for j in 0..t {
            debug_assert!((0..f).all(|r| gamma.get(r, f + j).is_zero()));
            for k in 0..t {
                let nk = &self.a_orders[k];
                let g = gamma.get(f + k, f + j).mod_floor(nk);
                if g.is_zero() {
                    continue;
                }
                let coef = (&self.a_orders[j] * g) / nk;
                for q in 0..d {
                    let add = &coef * &x[k * d + q];
                    out[j * d + q] += add;
                }
            }
        }
        self.reduce(&mut out);
        out
    }
}

fn unit(n: usize, k: usize) -> Vec<BigInt> {
    let mut e = vec![BigInt::zero(); n];
    e[k] = BigInt::one();
    e
}

fn scaled(g: &FgAbGroup, x: &[BigInt], k: &BigInt) -> Vec<BigInt> {
    let mut y: Vec<BigInt> = x.iter().map(|v| v * k).collect();
    g.reduce(&mut y);
    y
}

/// Lifts `m_j` of the torsion generators of `A` and the defects `b_j` with `i(b_j) = n_j·m_j`.
fn torsion_defects(i: &GroupHom, p: &GroupHom) -> Vec<(Vec<BigInt>, Vec<BigInt>)> {
    let (a, m) = (p.target(), p.source());
    let f = a.free_rank();
    a.torsion()
        .iter()
        .enumerate()
        .map(|(j, n)| {
            let lift = p
                .preimage(&unit(a.normal_dim(), f + j))
                .expect("projection of an exact sequence is surjective");
            let defect = i
                .preimage(&scaled(m, &lift, n))
                .expect("n·lift lies in the kernel of the projection");
            (lift, defect)
        })
        .collect()
}

/// Class of the extension in `Ext(A, B)`.
pub fn ext_class(s: &ShortExactSequence) -> ExtClass {
    let amb = Ambient::new(s.sub(), s.quot());
    let coords = torsion_defects(&s.i, &s.p)
        .into_iter()
        .flat_map(|(_, b)| b)
        .collect();
    amb.class(coords)
}

/// Inverse of a unimodular matrix, or `None`.
pub fn unimodular_inverse(m: &IntMatrix) -> Option<IntMatrix> {
    if m.rows() != m.cols() {
        return None;
    }
    let s = smith_normal_form(m);
    if s.rank != m.rows() || !s.diagonal().iter().all(One::is_one) {
        return None;
    }
    Some(&s.v * &s.u)
}

fn reduce_rows(g: &FgAbGroup, mut m: IntMatrix) -> IntMatrix {
    for k in g.free_rank()..g.normal_dim() {
        m.reduce_row(k, &g.modulus(k));
    }
    m
}

fn unit_group_generators(d: &BigInt) -> Result<Vec<(BigInt, BigInt)>, KTheoryError> {
    let d = d
        .to_u64()
        .filter(|&x| x <= UNIT_LIMIT)
        .ok_or_else(|| KTheoryError::ScopeBound(format!("unit group of Z_{d} too large")))?;
    let n = d as usize;
    let phi = (1..d).filter(|u| u.gcd(&d) == 1).count();
    let mut inside = vec![false; n];
    inside[1 % n] = true;
    let mut members = vec![1 % d];
    let mut gens = Vec::new();
    for u in 2..d {
        if members.len() == phi {
            break;
        }
        if u.gcd(&d) != 1 || inside[u as usize] {
            continue;
        }
        let mut new = members.clone();
        let mut power = u;
        while !inside[power as usize] {
            for &h in &members {
                let x = h * power % d;
                if !inside[x as usize] {
                    inside[x as usize] = true;
                    new.push(x);
                }
            }
            power = power * u % d;
        }
        members = new;
        let inv = (u as i64).extended_gcd(&(d as i64)).x.rem_euclid(d as i64);
        gens.push((BigInt::from(u), BigInt::from(inv)));
    }
    Ok(gens)
}

/// Generators of the cone-respecting automorphisms, as (forward, inverse) normal matrices.
fn aut_generators_normal(
    g: &FgAbGroup,
    cone: &ConeTag,
) -> Result<Vec<(IntMatrix, IntMatrix)>, KTheoryError> {
    let n = g.normal_dim();
    let f = g.free_rank();
    let elementary = |row: usize, col: usize, c: BigInt| {
        let mut m = IntMatrix::identity(n);
        m.set(row, col, c);
        m
    };
    let mut out = Vec::new();
    match cone {
        ConeTag::UnknownOrder => {
            return Err(KTheoryError::ScopeBound("order on the group is unknown".into()));
        }
        ConeTag::StandardSimplicial { rank, basis } => {
            if !g.torsion().is_empty() || f != *rank {
                return Err(KTheoryError::ScopeBound(
                    "cone does not match the group".into(),
                ));
            }
            let inv = unimodular_inverse(basis)
                .ok_or_else(|| KTheoryError::ScopeBound("cone basis is not unimodular".into()))?;
            for k in 0..rank.saturating_sub(1) {
                let mut perm = IntMatrix::identity(n);
                perm.swap_cols(k, k + 1);
                let m = &(basis * &perm) * &inv;
                out.push((m.clone(), m));
            }
        }
        ConeTag::Trivial => {
            if f > 2 {
                return Err(KTheoryError::ScopeBound(format!(
                    "automorphisms of free rank {f} are not enumerated"
                )));
            }
            if f >= 1 {
                let flip = elementary(0, 0, BigInt::from(-1));
                out.push((flip.clone(), flip));
            }
            if f == 2 {
                for (r, c) in [(0, 1), (1, 0)] {
                    out.push((
                        elementary(r, c, BigInt::one()),
                        elementary(r, c, BigInt::from(-1)),
                    ));
                }
            }
            let tors = g.torsion();
            for k in 0..f {
                for j in 0..tors.len() {
                    out.push((
                        elementary(f + j, k, BigInt::one()),
                        elementary(f + j, k, &tors[j] - 1),
                    ));
                }
            }
            for (j, d) in tors.iter().enumerate() {
                for (u, v) in unit_group_generators(d)? {
                    out.push((elementary(f + j, f + j, u), elementary(f + j, f + j, v)));
                }
            }
            for (i, di) in tors.iter().enumerate() {
                for (j, dj) in tors.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    let c = if di.is_multiple_of(dj) {
                        BigInt::one()
                    } else {
                        dj / di
                    };
                    let neg = (dj - &c).mod_floor(dj);
                    out.push((elementary(f + j, f + i, c), elementary(f + j, f + i, neg)));
                }
            }
        }
    }
    Ok(out
        .into_iter()
        .map(|(a, b)| (reduce_rows(g, a), reduce_rows(g, b)))
        .collect())
}

/// A generating set of the automorphisms of `g` that respect `cone`.
///
/// Never empty: a group whose only such automorphism is the identity yields `[id]`.
pub fn aut_generators(g: &Arc<FgAbGroup>, cone: &ConeTag) -> Result<Vec<GroupHom>, KTheoryError> {
    let gens = aut_generators_normal(g, cone)?;
    if gens.is_empty() {
        return Ok(vec![GroupHom::identity(g.clone())]);
    }
    Ok(gens
        .into_iter()
        .map(|(m, _)| {
            GroupHom::from_normal(g.clone(), g.clone(), &m).expect("generator is well defined")
        })
        .collect())
}

/// Vertical maps `(B → B', M → M', A → A')` making the two sequences' diagram commute.
#[derive(Clone, Debug, Serialize)]
pub struct SesWitness {
    pub sub_map: GroupHom,
    pub middle_map: GroupHom,
    pub quot_map: GroupHom,
    /// Size of the explored orbit when the match was found.
    pub orbit_explored: usize,
}

impl SesWitness {
    /// Checks commutativity, bijectivity and respect for the outer cones.
    pub fn verify(&self, s: &OrderedSes, t: &OrderedSes) -> bool {
        let (i, p) = (s.ses.inclusion(), s.ses.projection());
        let (i2, p2) = (t.ses.inclusion(), t.ses.projection());
        **self.sub_map.source() == **s.ses.sub()
            && **self.sub_map.target() == **t.ses.sub()
            && **self.middle_map.source() == **s.ses.middle()
            && **self.middle_map.target() == **t.ses.middle()
            && **self.quot_map.source() == **s.ses.quot()
            && **self.quot_map.target() == **t.ses.quot()
            && self.sub_map.is_isomorphism()
            && self.middle_map.is_isomorphism()
            && self.quot_map.is_isomorphism()
            && i.then(&self.middle_map).agrees_with(&self.sub_map.then(i2))
            && p.then(&self.quot_map).agrees_with(&self.middle_map.then(p2))
            && respects_cone(&self.sub_map, &s.sub_cone, &t.sub_cone)
            && respects_cone(&self.quot_map, &s.quot_cone, &t.quot_cone)
    }
}

fn respects_cone(h: &GroupHom, src: &ConeTag, dst: &ConeTag) -> bool {
    match (src, dst) {
        (ConeTag::Trivial, ConeTag::Trivial) => true,
        (
            ConeTag::StandardSimplicial { basis: b1, .. },
            ConeTag::StandardSimplicial { basis: b2, .. },
        ) => {
            let Some(inv) = unimodular_inverse(b2) else {
                return false;
            };
            let p = &(&inv * &h.normal_matrix()) * b1;
            let n = p.rows();
            let unit_cols = (0..n).all(|j| {
                let c = p.col(j);
                c.iter().filter(|x| x.is_one()).count() == 1
                    && c.iter().filter(|x| !x.is_zero()).count() == 1
            });
            unit_cols && p.determinant().abs().is_one()
        }
        _ => false,
    }
}

/// Normal matrix of the cone-matching identification of two isomorphic groups.
fn transport(dim: usize, src: &ConeTag, dst: &ConeTag) -> IntMatrix {
    match (src, dst) {
        (
            ConeTag::StandardSimplicial { basis: b1, .. },
            ConeTag::StandardSimplicial { basis: b2, .. },
        ) => b2 * &unimodular_inverse(b1).expect("cone bases are unimodular"),
        _ => IntMatrix::identity(dim),
    }
}

#[derive(Clone, Copy)]
enum Move {
    Sub(usize),
    Quot(usize),
}

/// Decides isomorphism of two ordered short exact sequences.
///
/// The second sequence is first carried onto the outer groups of the first. The
/// extensions are then isomorphic exactly when their classes share an orbit of
/// `Aut(A) × Aut(B)` (cone-respecting) acting on `Ext(A, B)`.
pub fn ses_isomorphic(s: &OrderedSes, t: &OrderedSes) -> Verdict {
    const ROUTE: &str = "extension orbit";
    for (cone, side) in [
        (&s.sub_cone, "first ideal"),
        (&s.quot_cone, "first quotient"),
        (&t.sub_cone, "second ideal"),
        (&t.quot_cone, "second quotient"),
    ] {
        if *cone == ConeTag::UnknownOrder {
            return Verdict::unknown(format!("{ROUTE}: order on the {side} K0 group is unknown"));
        }
    }
    let (b, m, a) = (s.ses.sub(), s.ses.middle(), s.ses.quot());
    let (b2, m2, a2) = (t.ses.sub(), t.ses.middle(), t.ses.quot());
    for (name, x, y) in [("ideal K0", b, b2), ("middle K0", m, m2), ("quotient K0", a, a2)] {
        if !group_iso(x, y) {
            return Verdict::mismatch(ROUTE, name, x, y);
        }
    }
    if !s.sub_cone.same_kind(&t.sub_cone) {
        return Verdict::mismatch(ROUTE, "ideal order", s.sub_cone.label(), t.sub_cone.label());
    }
    if !s.quot_cone.same_kind(&t.quot_cone) {
        return Verdict::mismatch(ROUTE, "quotient order", s.quot_cone.label(), t.quot_cone.label());
    }
    let amb = Ambient::new(b, a);
    if amb.order() > BigInt::from(EXT_ORDER_LIMIT) {
        return Verdict::unknown(format!(
            "{ROUTE}: |Ext| = {} exceeds the enumeration bound",
            amb.order()
        ));
    }
    let (gens_b, gens_a) = match (
        aut_generators_normal(b, &s.sub_cone),
        aut_generators_normal(a, &s.quot_cone),
    ) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) => return Verdict::unknown(format!("{ROUTE}: {e}")),
    };

    // carry t onto the outer groups of s
    let phi_b = transport(b.normal_dim(), &s.sub_cone, &t.sub_cone);
    let phi_a = transport(a.normal_dim(), &s.quot_cone, &t.quot_cone);
    let phi_a_inv = unimodular_inverse(&phi_a).expect("transport is invertible");
    let phi_b_hom = GroupHom::from_normal(b.clone(), b2.clone(), &phi_b).expect("identification");
    let phi_a_inv_hom =
        GroupHom::from_normal(a2.clone(), a.clone(), &phi_a_inv).expect("identification");
    let carried = ShortExactSequence {
        i: phi_b_hom.then(t.ses.inclusion()),
        p: t.ses.projection().then(&phi_a_inv_hom),
    };

    let start = ext_class(&s.ses);
    let target = ext_class(&carried);
    let mut index: HashMap<Vec<BigInt>, usize> = HashMap::new();
    let mut nodes: Vec<(Vec<BigInt>, Option<(usize, Move)>)> = vec![(start.coords.clone(), None)];
    index.insert(start.coords.clone(), 0);
    let mut found = (start.coords == target.coords).then_some(0);
    let mut head = 0;
    while found.is_none() && head < nodes.len() {
        let cur = nodes[head].0.clone();
        let nexts = gens_b
            .iter()
            .enumerate()
            .map(|(g, (fwd, _))| (amb.push(fwd, &cur), Move::Sub(g)))
            .chain(
                gens_a
                    .iter()
                    .enumerate()
                    .map(|(g, (fwd, _))| (amb.pull(fwd, &cur), Move::Quot(g))),
            );
        for (next, mv) in nexts {
            if index.contains_key(&next) {
                continue;
            }
            let id = nodes.len();
            index.insert(next.clone(), id);
            let hit = next == target.coords;
            nodes.push((next, Some((head, mv))));
            if hit {
                found = Some(id);
                break;
            }
        }
        head += 1;
    }

    let Some(hit) = found else {
        let orbit = nodes.into_iter().map(|(c, _)| amb.class(c)).collect();
        return Verdict::no(ROUTE, Obstruction::OrbitSeparation { orbit, target });
    };

    let mut path = Vec::new();
    let mut cur = hit;
    while let Some((parent, mv)) = nodes[cur].1 {
        path.push(mv);
        cur = parent;
    }
    path.reverse();
    let mut alpha_inv = IntMatrix::identity(b.normal_dim());
    let mut alpha = alpha_inv.clone();
    let mut gamma = IntMatrix::identity(a.normal_dim());
    for mv in path {
        match mv {
            Move::Sub(g) => {
                alpha = reduce_rows(b, &alpha * &gens_b[g].1);
                alpha_inv = reduce_rows(b, &gens_b[g].0 * &alpha_inv);
            }
            Move::Quot(g) => gamma = reduce_rows(a, &gens_a[g].1 * &gamma),
        }
    }
    let witness = build_witness(s, &carried, &alpha, &gamma, t).and_then(|beta| {
        let sub_map = GroupHom::from_normal(b.clone(), b2.clone(), &reduce_rows(b2, &phi_b * &alpha_inv)).ok()?;
        let quot_map = GroupHom::from_normal(a.clone(), a2.clone(), &reduce_rows(a2, &phi_a * &gamma)).ok()?;
        Some(SesWitness {
            sub_map,
            middle_map: beta,
            quot_map,
            orbit_explored: nodes.len(),
        })
    });
    match witness {
        Some(w) if w.verify(s, t) => Verdict::yes(ROUTE, Witness::SequenceIsomorphism(w)),
        _ => Verdict::unknown(format!("{ROUTE}: matching class found but the witness failed to verify")),
    }
}

/// Builds `β : M → M'` with `β∘(i∘α) = i''` and `p''∘β = γ∘p`, where `(i'', p'')` is `carried`.
fn build_witness(
    s: &OrderedSes,
    carried: &ShortExactSequence,
    alpha: &IntMatrix,
    gamma: &IntMatrix,
    t: &OrderedSes,
) -> Option<GroupHom> {
    let (b, m, a) = (s.ses.sub(), s.ses.middle(), s.ses.quot());
    let m2 = t.ses.middle();
    let alpha_h = GroupHom::from_normal(b.clone(), b.clone(), alpha).ok()?;
    let gamma_h = GroupHom::from_normal(a.clone(), a.clone(), gamma).ok()?;
    let i1 = alpha_h.then(s.ses.inclusion());
    let p1 = s.ses.projection().then(&gamma_h);
    let (i2, p2) = (&carried.i, &carried.p);
    let (ad, f) = (a.normal_dim(), a.free_rank());
    let mut lifts1 = Vec::with_capacity(ad);
    let mut lifts2 = Vec::with_capacity(ad);
    for k in 0..ad {
        let ek = unit(ad, k);
        let l1 = p1.preimage(&ek)?;
        let mut l2 = p2.preimage(&ek)?;
        if k >= f {
            let n = a.modulus(k);
            let c1 = i1.preimage(&scaled(m, &l1, &n))?;
            let c2 = i2.preimage(&scaled(m2, &l2, &n))?;
            let diff: Vec<BigInt> = c1.iter().zip(&c2).map(|(x, y)| x - y).collect();
            let times_n = GroupHom::from_normal(
                b.clone(),
                b.clone(),
                &IntMatrix::identity(b.normal_dim()).scale(&n),
            )
            .ok()?;
            let shift = i2.apply_normal(&times_n.preimage(&diff)?);
            for (x, y) in l2.iter_mut().zip(shift) {
                *x += y;
            }
            m2.reduce(&mut l2);
        }
        lifts1.push(l1);
        lifts2.push(l2);
    }
    let md = m.normal_dim();
    let mut cols = Vec::with_capacity(md);
    for q in 0..md {
        let eq = unit(md, q);
        let x = p1.apply_normal(&eq);
        let mut y = eq;
        for (xk, lk) in x.iter().zip(&lifts1) {
            for (yi, li) in y.iter_mut().zip(lk) {
                *yi -= xk * li;
            }
        }
        m.reduce(&mut y);
        let bq = i1.preimage(&y)?;
        let mut img = i2.apply_normal(&bq);
        for (xk, lk) in x.iter().zip(&lifts2) {
            for (yi, li) in img.iter_mut().zip(lk) {
                *yi += xk * li;
            }
        }
        m2.reduce(&mut img);
        cols.push(img);
    }
    let beta = IntMatrix::from_columns(m2.normal_dim(), &cols);
    GroupHom::from_normal(m.clone(), m2.clone(), &beta).ok()
}
