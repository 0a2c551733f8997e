//! Exact integer linear algebra and the K-theory of graph algebras.

mod ext;
mod graph_k;
mod group;
pub mod matrix;
mod smith;

pub use ext::{
    aut_generators, ext_class, ses_isomorphic, unimodular_inverse, ExtClass, OrderedSes,
    SesWitness, ShortExactSequence, EXT_ORDER_LIMIT,
};
pub use graph_k::{
    assemble_k_six, b_matrix, cone_tag, graph_k, induced_k0_maps, induced_k1_map, k_groups,
    order_cone, ConeTag, ConnectingMap, GraphK, KSixInvariant,
};
pub use group::{group_iso, is_exact_at, FgAbGroup, GroupHom, HomError};
pub use matrix::IntMatrix;
pub use smith::{smith_normal_form, SmithDecomposition};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KTheoryError {
    #[error("the graph algebra is not simple")]
    NotSimple,
    #[error("vertex set is not saturated hereditary")]
    NotSaturatedHereditary,
    #[error("breaking vertices present: {0:?}")]
    BreakingVertices(Vec<usize>),
    #[error("regular vertices of the quotient differ from the regular vertices outside H")]
    RegularityMismatch,
    #[error("Condition (K) fails")]
    ConditionKFails,
    #[error("the ideal must be proper and nonzero")]
    TrivialIdeal,
    #[error("sequence is not exact")]
    NotExact,
    #[error("outside the supported scope: {0}")]
    ScopeBound(String),
}
