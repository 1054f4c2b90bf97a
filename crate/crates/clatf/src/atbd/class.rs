use std::fmt;

use num_integer::Integer;
use num_traits::Signed;

use super::diagram::Atbd;
use crate::error::{Error, Result};
use crate::exact::{LatticeVec, Mat2, Rat, RatVec, Vec2};

/// Linear group used to identify polygons.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    #[default]
    Sl,
    Gl,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::Sl => "SL(2,Z)",
            Group::Gl => "GL(2,Z)",
        })
    }
}

impl std::str::FromStr for Group {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sl" => Ok(Group::Sl),
            "gl" => Ok(Group::Gl),
            _ => Err(Error::Invalid(format!("unknown group {s}"))),
        }
    }
}

/// Polygon with the monotone point at the origin, in canonical position.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusClass {
    pub canonical_polygon: Vec<RatVec>,
    pub group: Group,
}

/// SL(2,Z) map sending d0 to (1,0) and d1 into the strip 0 <= x < y-coordinate.
pub(crate) fn frame(d0: LatticeVec, d1: LatticeVec) -> Mat2 {
    let e = d0.x.extended_gcd(&d0.y);
    let (s, r) = if e.gcd < 0 { (-e.x, -e.y) } else { (e.x, e.y) };
    let g = Mat2([[s, r], [-d0.y, d0.x]]);
    let w = g.apply(d1);
    let k = match w.y.signum() {
        1 => -Integer::div_floor(&w.x, &w.y),
        -1 => Integer::div_floor(&w.x, &-w.y),
        _ => 0,
    };
    Mat2([[1, k], [0, 1]]) * g
}

fn dirs(poly: &[RatVec]) -> Vec<LatticeVec> {
    let n = poly.len();
    (0..n)
        .map(|i| (poly[(i + 1) % n].clone() - poly[i].clone()).primitive_direction().expect("distinct vertices"))
        .collect()
}

/// One candidate per corner: the frame map and the rotated, mapped vertex list.
pub(crate) fn candidates(poly: &[RatVec]) -> Vec<(Mat2, Vec<RatVec>)> {
    let n = poly.len();
    let ds = dirs(poly);
    (0..n)
        .map(|i| {
            let g = frame(ds[i], ds[(i + 1) % n]);
            (g, (0..n).map(|j| g.apply_rat(&poly[(i + 1 + j) % n])).collect())
        })
        .collect()
}

fn reflect(poly: &[RatVec]) -> Vec<RatVec> {
    poly.iter().rev().map(|v| Vec2::new(v.x.clone(), -v.y.clone())).collect()
}

pub fn canonical_polygon(poly: &[RatVec], group: Group) -> Vec<RatVec> {
    let best = |p: &[RatVec]| candidates(p).into_iter().map(|c| c.1).min().expect("nonempty polygon");
    let a = best(poly);
    match group {
        Group::Sl => a,
        Group::Gl => a.min(best(&reflect(poly))),
    }
}

fn centered(a: &Atbd) -> Result<Vec<RatVec>> {
    let p = a.monotone_point()?;
    Ok(a.boundary.iter().map(|v| v.clone() - p.clone()).collect())
}

/// Forget nodes and cuts; canonicalize the centred polygon (SL(2,Z) unless asked otherwise).
pub fn torus_class(a: &Atbd) -> Result<TorusClass> {
    torus_class_in(a, Group::Sl)
}

pub fn torus_class_in(a: &Atbd, group: Group) -> Result<TorusClass> {
    Ok(TorusClass { canonical_polygon: canonical_polygon(&centered(a)?, group), group })
}

/// Canonical key of a whole diagram up to SL(2,Z) about the monotone point:
/// polygon plus node directions and frozen flags.
pub type StateKey = (Vec<RatVec>, Vec<(LatticeVec, bool)>);

pub fn state_key(a: &Atbd) -> Result<StateKey> {
    let poly = centered(a)?;
    candidates(&poly)
        .into_iter()
        .map(|(g, vs)| {
            let mut ns: Vec<(LatticeVec, bool)> = a.nodes.iter().map(|n| (g.apply(n.direction), n.frozen)).collect();
            ns.sort();
            (vs, ns)
        })
        .min()
        .ok_or_else(|| Error::BadPolygon("empty".into()))
}

impl TorusClass {
    pub fn vertex_count(&self) -> usize {
        self.canonical_polygon.len()
    }

    pub fn is_lattice(&self) -> bool {
        self.canonical_polygon.iter().all(|v| v.x.is_integer() && v.y.is_integer())
    }

    /// Twice the area, an invariant of the class.
    pub fn double_area(&self) -> Rat {
        let p = &self.canonical_polygon;
        let n = p.len();
        (0..n).map(|i| p[i].det(&p[(i + 1) % n])).sum::<Rat>().abs()
    }
}
