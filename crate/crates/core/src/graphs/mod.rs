//! Graph representation, family generators, automorphism orbits and
//! neighbourhood statistics.

mod canon;
mod families;
mod graph;
mod symmetry;

pub use families::{generate, FamilySpec, RANDOM_REGULAR_RETRIES};
pub use graph::{Bipartition, Graph, GraphJson};
pub use symmetry::{
    ball_statistics, edge_transitivity_status, transitivity_status, verify_edge_transitivity, verify_transitivity, NeighborhoodStats, Symmetry, TransitivityMode,
    TransitivityVerdict, DEFAULT_BALL_BOUND, DEFAULT_TRANSITIVITY_BOUND,
};
