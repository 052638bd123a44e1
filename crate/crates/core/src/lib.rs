//! Exact arithmetic and combinatorics for arithmetic Fuchsian groups, Shimura
//! curve dual graphs and Brandt/Hecke modules.
//!
//! The crate is `no_std` with `alloc`. Every operation is a pure function of
//! its inputs; randomised algorithms draw from a seeded ChaCha stream so that
//! results are reproducible run to run.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod dualgraph;
pub mod error;
pub mod exactalg;
pub mod fuchsian;
pub mod hecke;
pub mod quatarith;

pub use error::{Error, ErrorKind, Result};
