//! Combinatorial and K-theoretic invariants of finite graph C*-algebras,
//! and decision procedures for stable isomorphism within the classified families.

pub mod classify;
pub mod graph;
pub mod ktheory;
pub mod structure;
pub mod verdict;
