use std::time::Instant;

use cstar_core::classify::{decide_pair, decide_unique_ideal, decide_unique_ideal_congruence, TwoVertexParams};
use cstar_core::graph::VertexSet;
use cstar_core::ktheory::{assemble_k_six, ses_isomorphic, OrderedSes};
use cstar_core::verdict::Answer;

fn family() -> Vec<TwoVertexParams> {
    let diag: Vec<Option<u64>> = [Some(0)].into_iter().chain((2..=8).map(Some)).chain([None]).collect();
    let off: Vec<Option<u64>> = (1..=10).map(Some).chain([None]).collect();
    let mut out = Vec::new();
    for &a in &diag {
        for &b in &off {
            for &d in &diag {
                let p = TwoVertexParams::from_u64(a, b, Some(0), d);
                if p.in_unique_ideal_family() {
                    out.push(p);
                }
            }
        }
    }
    out
}

#[test]
fn family_size() {
    assert_eq!(family().len(), 738);
}

#[test]
fn congruence_agrees_with_extension_orbits() {
    let start = Instant::now();
    let fam = family();
    let w = VertexSet::from_indices(2, [1]);
    let seqs: Vec<OrderedSes> = fam
        .iter()
        .map(|p| {
            let k = assemble_k_six(&p.to_graph(), &w).expect("in-scope family member");
            assert!(k.k0_row_exact);
            OrderedSes::from_k_six(&k).unwrap()
        })
        .collect();
    let mut disagreements = Vec::new();
    let mut unknowns = 0;
    for (i, p) in fam.iter().enumerate() {
        for (j, q) in fam.iter().enumerate() {
            let closed = decide_unique_ideal_congruence(p, q).unwrap();
            let orbit = ses_isomorphic(&seqs[i], &seqs[j]);
            unknowns += usize::from(closed.is_unknown()) + usize::from(orbit.is_unknown());
            assert!(closed.well_formed() && orbit.well_formed());
            if closed.answer != orbit.answer {
                disagreements.push(format!("{p} vs {q}: {:?}/{:?} ({})", closed.answer, orbit.answer, orbit.route));
            }
        }
    }
    assert!(disagreements.is_empty(), "{} disagreements, first: {:?}", disagreements.len(), &disagreements[..disagreements.len().min(5)]);
    assert_eq!(unknowns, 0);
    eprintln!("sweep of {} ordered pairs took {:?}", fam.len() * fam.len(), start.elapsed());
}

#[test]
fn two_vertex_route_matches_unique_ideal_route() {
    let fam = family();
    // pairs sharing (a, d) exercise the sequence comparison; others are decided by invariants
    for p in &fam {
        for q in fam.iter().filter(|q| q.a == p.a && q.d == p.d) {
            let (g, h) = (p.to_graph(), q.to_graph());
            let via_pair = decide_pair(&g, &h);
            let via_ideal = decide_unique_ideal(&g, &h);
            assert_ne!(via_pair.answer, Answer::Unknown, "{p} vs {q}");
            assert_eq!(via_pair.answer, via_ideal.answer, "{p} vs {q}: {} / {}", via_pair.route, via_ideal.route);
        }
    }
}
