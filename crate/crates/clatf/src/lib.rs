//! Rank-2 cluster scattering diagrams, broken lines and theta functions,
//! polytope mutation with cuts, and almost-toric base diagrams, all in
//! exact arithmetic.

pub mod affine;
pub mod atbd;
pub mod error;
pub mod exact;
pub mod scattering;
pub mod theta;

pub use error::{Error, Result};
pub use exact::{LatticeVec, Mat2, Rat, RatVec, TruncatedSeries, UnimodularAffineMap, Vec2};
