//! Seeds, walls, consistent scattering diagrams and their transformations.

mod auto;
mod complete;
mod diagram;
mod monodromy;
mod mutate;
mod seed;
mod wall;

pub use auto::{apply_crossing, crossing_automorphism, ExactAutomorphism, RingAutomorphism};
pub use complete::{complete, complete_with_bound};
pub use diagram::{
    chambers, initial_diagram, initial_diagram_with_order, is_consistent, path_ordered_product, ConsistencyReport,
    Defect, LoopProduct, ScatteringDiagram, DEFAULT_ORDER,
};
pub use monodromy::{dp5_canonical, dp5_monodromy_diagram, dp5_partially_pushed, move_worm, recut, WormParam};
pub use mutate::mutate_diagram;
pub use seed::{chamber_orbit, chamber_period, seed_cone, seed_mutate, ClusterShear, Seed, Variant};
pub use wall::{SingularPoint, Support, Wall, WallFunction, WallKind};

#[cfg(test)]
mod tests;
