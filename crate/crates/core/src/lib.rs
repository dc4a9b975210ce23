//! Lemnatomic polynomials over the Gaussian integers.
//!
//! The crate computes the polynomials whose roots are the values of the
//! lemniscate sine at primitive torsion points of the Gaussian lattice, by an
//! exact symbolic route and an arbitrary-precision numeric route, and runs
//! finite-field splitting experiments against them.

pub mod classfield;
pub mod error;
pub mod exec;
pub mod gaussint;
pub mod gfq;
pub mod lemnatomic;
pub mod lemniscate;
pub mod residue;
pub mod zipoly;

pub use error::{Error, Result};
pub use exec::Exec;
pub use gaussint::GaussInt;
