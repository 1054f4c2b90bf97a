//! Exact planar lattice arithmetic and truncated Laurent series.

mod laurent;
mod matrix;
mod polygon;
mod series;
mod skew;
mod vec;

pub use laurent::{Laurent, RatFunc};
pub use matrix::{rat_vec, Mat2, UnimodularAffineMap};
pub use polygon::{convex_hull, dilation_points, lattice_length, Polygon};
pub use series::{binomial, series_inverse, series_mul, series_pow_binomial, Grading, TruncatedSeries};
pub use skew::{FiniteType, SkewForm};
pub use vec::{
    divisibility_index, half_plane_shear, half_plane_shear_inv, lattice_to_scalar, primitive, rat, ratio, LatticeVec,
    Rat, RatVec, Scalar, Vec2,
};
