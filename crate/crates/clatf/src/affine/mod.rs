//! Polygons in affine structures with cuts: cluster-shear mutation,
//! chartwise convexity, tropicalization of boundary cycles, wall hulls.

mod cut;
mod hull;
mod shear;
mod trop;
#[cfg(test)]
mod tests;

pub use cut::{chartwise_convex, chartwise_convex_for, first_return, mutate_polytope, Cut, CutPolytope};
pub use hull::{wall_direction_hull, wall_generators};
pub use shear::{merge_collinear, PiecewiseShear};
pub use trop::{tropicalize, LooijengaData, TropAtlas};
