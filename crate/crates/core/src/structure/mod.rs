//! Hereditary and saturated vertex sets, the admissible-pair lattice,
//! Condition (K), subgraphs attached to an ideal, and the constructive
//! cycle-with-entry witness.

mod closure;
mod cycles;
mod ideals;
mod lattice;

pub use closure::{
    breaking_vertices, hereditary_closure, is_hereditary, is_saturated, saturate,
    saturated_hereditary_sets,
};
pub use cycles::{condition_k, cycle_with_entry, has_cycle, ConditionK, CycleWitness};
pub use ideals::{
    case_tag, ideal_subgraph, is_simple, largest_proper_ideal, quotient_graph,
    unique_ideal_structure, CaseTag, UniqueIdeal, UniqueIdealChecks,
};
pub use lattice::{ideal_lattice, AdmissiblePair, IdealLattice};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructureError {
    #[error("vertex set is not hereditary")]
    NotHereditary,
    #[error("vertex set is not saturated hereditary")]
    NotSaturatedHereditary,
    #[error("the ideal must be proper and nonzero (H neither empty nor all vertices)")]
    TrivialIdeal,
    #[error("the quotient by all vertices is empty")]
    EmptyQuotient,
    #[error("Condition (K) fails, so not every ideal is gauge invariant")]
    ConditionKFails,
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
}
