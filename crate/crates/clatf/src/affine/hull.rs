use crate::error::Result;
use crate::exact::{convex_hull, LatticeVec};
use crate::scattering::{ScatteringDiagram, Support};

use super::cut::CutPolytope;

/// Primitive generators of the wall supports, both ways along lines.
pub fn wall_generators(d: &ScatteringDiagram) -> Vec<LatticeVec> {
    let mut out = vec![];
    for w in &d.walls {
        let u = w.support.dir();
        out.push(u);
        if matches!(w.support, Support::Line { .. }) {
            out.push(-u);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Convex hull of the wall generators, without cuts.
pub fn wall_direction_hull(d: &ScatteringDiagram) -> Result<CutPolytope> {
    let pts: Vec<_> = wall_generators(d).into_iter().map(|v| v.to_rat()).collect();
    CutPolytope::new(convex_hull(&pts), vec![], d.seed.clone(), d.variant)
}
