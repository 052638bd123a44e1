//! Exact arithmetic: rationals, polynomials, finite fields, number fields,
//! prime splitting, real embeddings and the Dedekind zeta value at 2.

pub mod arith;
pub mod conway;
pub mod cyclotomic;
pub mod field;
pub mod linalg;
pub mod numfield;
pub mod poly;
pub mod splitting;
pub mod zeta;
pub mod zfactor;

pub use cyclotomic::cyclotomic_membership;
pub use field::{factor_poly_mod, FiniteField, FqElem, FqFactor, GaloisField, PolyOps, PrimeField};
pub use numfield::{NFElem, NumberField, Sign};
pub use poly::{rat, rat_frac, Int, IntPoly, Rat, UniPoly};
pub use splitting::{split_prime, PrimeSplitting};
pub use zeta::{zeta_at_2, ZetaValue};
