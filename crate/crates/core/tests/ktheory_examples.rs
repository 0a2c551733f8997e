use std::sync::Arc;

use num_bigint::BigInt;

use cstar_core::graph::{Graph, VertexSet};
use cstar_core::ktheory::{
    assemble_k_six, aut_generators, b_matrix, cone_tag, ext_class, group_iso, induced_k0_maps, induced_k1_map,
    k_groups, ses_isomorphic, smith_normal_form, ConeTag, FgAbGroup, GroupHom, IntMatrix, KTheoryError, OrderedSes,
    ShortExactSequence,
};
use cstar_core::structure::CaseTag;
use cstar_core::verdict::{Answer, Witness};

const INF: Option<u64> = None;

fn m(rows: &[&[Option<u64>]]) -> Graph {
    Graph::from_u64_matrix(rows)
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn w() -> VertexSet {
    VertexSet::from_indices(2, [1])
}

fn two_vertex(a: Option<u64>, b: Option<u64>, d: Option<u64>) -> Graph {
    m(&[&[a, b], &[Some(0), d]])
}

fn ses_of(g: &Graph, h: &VertexSet) -> OrderedSes {
    OrderedSes::from_k_six(&assemble_k_six(g, h).unwrap()).unwrap()
}

/// Vertices ordered (v, w, x): x has `k` edges to each of the sinks v, w and two loops.
fn sinks_below_two_loops(k: u64) -> Graph {
    m(&[
        &[Some(0), Some(0), Some(0)],
        &[Some(0), Some(0), Some(0)],
        &[Some(k), Some(k), Some(2)],
    ])
}

#[test]
fn smith_examples() {
    for n in 1..5 {
        let s = smith_normal_form(&IntMatrix::identity(n));
        assert!(s.d.is_identity() && s.verify(&IntMatrix::identity(n)));
    }
    let col = IntMatrix::from_i64(&[&[1], &[3]]);
    let s = smith_normal_form(&col);
    assert_eq!(s.d, IntMatrix::from_i64(&[&[1], &[0]]));
    let s = smith_normal_form(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]]));
    assert_eq!(s.d, IntMatrix::from_i64(&[&[1, 0], &[0, 6]]));
}

#[test]
fn b_matrix_examples() {
    assert_eq!(b_matrix(&two_vertex(Some(4), Some(1), Some(0))), IntMatrix::from_i64(&[&[3], &[1]]));
    assert_eq!(b_matrix(&two_vertex(Some(0), INF, Some(3))), IntMatrix::from_i64(&[&[0], &[2]]));
    let b = b_matrix(&m(&[&[Some(0)]]));
    assert_eq!((b.rows(), b.cols()), (1, 0));
}

#[test]
fn k_group_examples() {
    for n in 2..9u64 {
        let (k0, k1) = k_groups(&m(&[&[Some(n)]]));
        assert!(group_iso(&k0, &FgAbGroup::normal(0, &ints(&[n as i64 - 1]))));
        assert!(k1.is_trivial());
    }
    let (k0, k1) = k_groups(&two_vertex(Some(4), Some(1), Some(0)));
    assert!(group_iso(&k0, &FgAbGroup::free(1)) && k1.is_trivial());
    let (k0, k1) = k_groups(&m(&[&[Some(0)]]));
    assert!(group_iso(&k0, &FgAbGroup::free(1)) && k1.is_trivial());
}

#[test]
fn cone_tag_examples() {
    assert_eq!(cone_tag(&m(&[&[Some(4)]])).unwrap(), ConeTag::Trivial);
    assert!(matches!(cone_tag(&m(&[&[Some(0)]])).unwrap(), ConeTag::StandardSimplicial { rank: 1, .. }));
    assert_eq!(cone_tag(&m(&[&[Some(0), Some(0)], &[Some(0), Some(0)]])), Err(KTheoryError::NotSimple));
}

#[test]
fn induced_k0_map_examples() {
    let (i0, p0) = induced_k0_maps(&two_vertex(Some(4), Some(1), Some(0)), &w()).unwrap();
    assert!(i0.is_injective());
    assert!(group_iso(p0.target(), &FgAbGroup::normal(0, &ints(&[3]))));
    assert!(p0.is_surjective());

    let (i0, _) = induced_k0_maps(&two_vertex(Some(0), INF, Some(3)), &w()).unwrap();
    assert!(group_iso(i0.source(), &FgAbGroup::normal(0, &ints(&[2]))));
    assert!(group_iso(i0.target(), &FgAbGroup::normal(1, &ints(&[2]))));
    // [x] -> [(x, 0)]: the generator w goes to the class of w
    assert_eq!(i0.matrix(), &IntMatrix::from_i64(&[&[0], &[1]]));

    let g = two_vertex(Some(4), Some(1), Some(0));
    let (i0, p0) = induced_k0_maps(&g, &VertexSet::empty(2)).unwrap();
    assert!(i0.source().is_trivial());
    assert!(p0.is_isomorphism() && p0.matrix().is_identity());
}

#[test]
fn induced_k1_map_examples() {
    let diag = [Some(0), Some(2), Some(5), INF];
    for &a in &diag {
        for &d in &diag {
            for b in [Some(1), Some(3), INF] {
                let g = two_vertex(a, b, d);
                let Ok((i1, p1)) = induced_k1_map(&g, &w()) else { continue };
                assert!(i1.source().is_trivial() && i1.target().is_trivial() && p1.target().is_trivial());
            }
        }
    }
    let g = m(&[&[Some(2), Some(1)], &[Some(1), Some(2)]]);
    let (_, p1) = induced_k1_map(&g, &VertexSet::empty(2)).unwrap();
    assert!(p1.is_isomorphism() && p1.matrix().is_identity());
    let chain = m(&[&[Some(0), Some(1), Some(0)], &[Some(0), Some(0), Some(1)], &[Some(0), Some(0), Some(0)]]);
    assert!(k_groups(&chain).1.is_trivial());
}

#[test]
fn k_six_examples() {
    let k = assemble_k_six(&two_vertex(Some(4), Some(1), Some(0)), &w()).unwrap();
    assert!(group_iso(&k.k0_ideal, &FgAbGroup::free(1)));
    assert!(group_iso(&k.k0_alg, &FgAbGroup::free(1)));
    assert!(group_iso(&k.k0_quot, &FgAbGroup::normal(0, &ints(&[3]))));
    assert!(k.k1_ideal.is_trivial() && k.k1_alg.is_trivial() && k.k1_quot.is_trivial());
    assert!(k.k0_row_exact);

    let k = assemble_k_six(&sinks_below_two_loops(1), &VertexSet::from_indices(3, [0, 1])).unwrap();
    assert!(group_iso(&k.k0_ideal, &FgAbGroup::free(2)));
    assert_eq!(k.k0_alg.relations(), &IntMatrix::from_i64(&[&[1], &[1], &[1]]));
    assert!(k.k0_quot.is_trivial());

    let k = assemble_k_six(&two_vertex(Some(4), Some(2), Some(4)), &w()).unwrap();
    let z3 = FgAbGroup::normal(0, &ints(&[3]));
    assert!(group_iso(&k.k0_ideal, &z3) && group_iso(&k.k0_quot, &z3));
    assert_eq!(k.k0_alg.relations(), &IntMatrix::from_i64(&[&[3, 0], &[2, 3]]));
    assert_eq!(k.case_tag, CaseTag::InfInf);
}

#[test]
fn group_iso_examples() {
    assert!(group_iso(&FgAbGroup::free(1), &FgAbGroup::free(1)));
    let z6 = FgAbGroup::from_relations(IntMatrix::from_i64(&[&[6]]));
    let z2z3 = FgAbGroup::from_relations(IntMatrix::from_i64(&[&[2, 0], &[0, 3]]));
    assert!(group_iso(&z6, &z2z3));
    assert!(!group_iso(&FgAbGroup::free(1), &FgAbGroup::normal(0, &ints(&[3]))));
}

#[test]
fn aut_generator_examples() {
    let z3 = Arc::new(FgAbGroup::normal(0, &ints(&[3])));
    let gens = aut_generators(&z3, &ConeTag::Trivial).unwrap();
    assert_eq!(gens.iter().map(|g| g.normal_matrix()).collect::<Vec<_>>(), vec![IntMatrix::from_i64(&[&[2]])]);

    let z = Arc::new(FgAbGroup::free(1));
    let cone = cone_tag(&m(&[&[Some(0)]])).unwrap();
    let gens = aut_generators(&z, &cone).unwrap();
    assert!(gens.iter().all(|g| g.normal_matrix().is_identity()));

    let mixed = Arc::new(FgAbGroup::normal(1, &ints(&[3])));
    let gens: Vec<IntMatrix> = aut_generators(&mixed, &ConeTag::Trivial).unwrap().iter().map(GroupHom::normal_matrix).collect();
    for expected in [
        IntMatrix::from_i64(&[&[-1, 0], &[0, 1]]),
        IntMatrix::from_i64(&[&[1, 0], &[0, 2]]),
        IntMatrix::from_i64(&[&[1, 0], &[1, 1]]),
    ] {
        assert!(gens.contains(&expected), "missing generator {expected:?}");
    }
}

#[test]
fn ext_class_examples() {
    let c = ext_class(&ses_of(&two_vertex(Some(4), Some(1), Some(0)), &w()).ses);
    assert_eq!(c.ambient_order(), BigInt::from(3));
    assert!(!c.is_zero());
    let c = ext_class(&ses_of(&two_vertex(Some(4), Some(3), Some(0)), &w()).ses);
    assert!(c.is_zero());
    let free = ShortExactSequence::split(Arc::new(FgAbGroup::normal(0, &ints(&[4]))), Arc::new(FgAbGroup::free(2)));
    let c = ext_class(&free);
    assert_eq!(c.ambient_order(), BigInt::from(1));
}

#[test]
fn fourex_sequences() {
    let s1 = ses_of(&two_vertex(Some(4), Some(1), Some(0)), &w());
    let s2 = ses_of(&two_vertex(Some(4), Some(2), Some(0)), &w());
    let s3 = ses_of(&two_vertex(Some(4), Some(3), Some(0)), &w());
    let v = ses_isomorphic(&s1, &s2);
    assert_eq!(v.answer, Answer::Yes);
    match &v.witness {
        Some(Witness::SequenceIsomorphism(wit)) => assert!(wit.verify(&s1, &s2)),
        other => panic!("unexpected witness {other:?}"),
    }
    assert_eq!(ses_isomorphic(&s1, &s3).answer, Answer::No);
    assert_eq!(ses_isomorphic(&s2, &s3).answer, Answer::No);
    let v = ses_isomorphic(&s1, &s1);
    match &v.witness {
        Some(Witness::SequenceIsomorphism(wit)) => {
            assert!(wit.sub_map.normal_matrix().is_identity());
            assert!(wit.quot_map.normal_matrix().is_identity());
        }
        other => panic!("unexpected witness {other:?}"),
    }
}

#[test]
fn listed_beta_commutes() {
    let h = VertexSet::from_indices(3, [0, 1]);
    let (s, t) = (ses_of(&sinks_below_two_loops(1), &h), ses_of(&sinks_below_two_loops(2), &h));
    let beta = GroupHom::new(
        s.ses.middle().clone(),
        t.ses.middle().clone(),
        IntMatrix::from_i64(&[&[1, 0, 1], &[0, 1, 1], &[0, 0, 1]]),
    )
    .expect("well defined on the cokernels");
    assert!(beta.is_isomorphism());
    let id = GroupHom::new(s.ses.sub().clone(), t.ses.sub().clone(), IntMatrix::identity(2)).unwrap();
    assert!(s.ses.inclusion().then(&beta).agrees_with(&id.then(t.ses.inclusion())));
}
