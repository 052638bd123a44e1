//! Brandt and Hecke linear algebra: constituents, mod-ℓ eigensystems,
//! congruences and connectivity of Spec(T).

pub mod brandt_q;
pub mod congruence;
pub mod constituents;
pub mod dataset;
pub mod index;
pub mod modell;

pub use brandt_q::{brandt_over_q, BrandtOverQ, MaximalOrder};
pub use congruence::{
    congruence_detect, connectivity, CongruenceEdge, CongruenceGraph, CongruenceResult,
    CongruenceVerdict, EigenTable,
};
pub use constituents::{split_constituents, stable_dimensions, Constituent};
pub use dataset::{BrandtDataset, BrandtEdge, HeckeMatrix};
pub use index::{order_index_divisor, IndexCertificate};
pub use modell::{
    constituent_eigensystems, eigensystems, mod_ell_eigensystems, orbit_hits, theta_label,
    Eigensystem, FrobeniusOrbit, ModEllReport,
};
