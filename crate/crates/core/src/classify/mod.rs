//! Stable-isomorphism decisions, ideal stability and graph traces.

mod pair;
mod stability;
mod trace;
mod two_vertex;
mod units;

pub use pair::{
    decide_largest_af_ideal, decide_pair, decide_simple, decide_unique_ideal, find_graph_isomorphism,
};
pub use stability::{stability_of_unique_ideal, InfiniteBundle, StabilityVerdict, StabilityWitness};
pub use trace::{graph_trace_feasibility, TraceCertificate, TraceFeasibility, TraceSystem};
pub use two_vertex::{decide_unique_ideal_congruence, decide_two_vertex, TwoVertexCase, TwoVertexParams};
pub use units::unit_orbit_eq;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("expected a graph with exactly two vertices, found {0}")]
    NotTwoVertex(usize),
    #[error("Condition (K) fails")]
    ConditionKFails,
    #[error("not an upper-triangular unique-ideal two-vertex graph: {0}")]
    NotInFamily(String),
    #[error("the graph does not have exactly one proper nontrivial ideal")]
    NoUniqueIdeal,
}
