//! Heuristics for counting elliptic curves over Q ordered by
//! discriminant or conductor: exact local reduction statistics,
//! global enumeration of minimal models, real-period evaluation,
//! a random-matrix model for analytic-rank vanishing, and reduction
//! statistics for rank-2 Mordell-Weil lattices.

pub mod arith;
pub mod curve;
pub mod enumerate;
pub mod error;
pub mod localmodel;
pub mod mwlattice;
pub mod period;
pub mod rmt;
pub mod special;

pub use error::{Error, Result};
