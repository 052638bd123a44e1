//! IO, file formats, fixtures and the command-line front end for `shimura-core`.

pub mod census;
pub mod cli;
pub mod error;
pub mod fixtures;
pub mod formats;
pub mod ledger;
pub mod manifest;
