//! Canonical strict-complementarity partitions of multifold homogeneous
//! conic systems `Ax = 0, x in K_1 x ... x K_r` and their alternatives
//! `A'y in K_1* x ... x K_r*`.
//!
//! Every block index is labelled with one of six classes (`B`, `B'`, `N`,
//! `N'`, `C`, `O`) and the labelling comes with a verifiable pair of most
//! interior solutions. Polyhedral systems also have an exact rational path.

pub mod cone;
pub mod error;
pub mod exact;
pub mod geometry;
pub mod io;
pub mod partition;
mod par;
pub mod solver;

pub use error::{Error, Result};
