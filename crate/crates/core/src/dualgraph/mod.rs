//! Weighted multigraphs for dual graphs of Mumford curves: bipartite doubles
//! from Brandt data, quotients, stable contraction, automorphisms and
//! admissibility.

pub mod admissible;
pub mod aut;
pub mod graph;
pub mod ops;
pub mod structure;

pub use admissible::{
    admissible_analysis, element_admissibility, Admissibility, AdmissibleReport, ElementReport,
};
pub use aut::{automorphism_group, GraphAutomorphism, Perm, PermGroup};
pub use graph::{BettiReport, Edge, Graph, Vertex};
pub use ops::{atkin_lehner_swap, build_double, quotient_by, stabilize, StabilizeReport};
pub use structure::{group_structure, GroupReport};
