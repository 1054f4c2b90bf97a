use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::matrix::UnimodularAffineMap;
use super::vec::{rat, LatticeVec, Rat, RatVec, Vec2};
use crate::error::{Error, Result};

/// Closed convex polygon with rational vertices, stored counterclockwise
/// without collinear vertices. Points and segments are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polygon {
    vertices: Vec<RatVec>,
}

fn cross(o: &RatVec, a: &RatVec, b: &RatVec) -> Rat {
    (a.clone() - o.clone()).det(&(b.clone() - o.clone()))
}

/// Andrew's monotone chain; strict vertices only, counterclockwise from the lowest-leftmost.
pub fn convex_hull(points: &[RatVec]) -> Vec<RatVec> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<RatVec> = vec![];
    for p in &pts {
        while lower.len() >= 2 && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<RatVec> = vec![];
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn floor_i64(q: &Rat) -> i64 {
    q.floor().to_integer().to_i64().expect("coordinate fits in i64")
}

fn ceil_i64(q: &Rat) -> i64 {
    q.ceil().to_integer().to_i64().expect("coordinate fits in i64")
}

impl Polygon {
    pub fn new(points: Vec<RatVec>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::BadPolygon("no vertices".into()));
        }
        Ok(Polygon { vertices: convex_hull(&points) })
    }

    pub fn from_lattice(points: &[(i64, i64)]) -> Result<Self> {
        Self::new(points.iter().map(|&(x, y)| RatVec::from_ints(x, y)).collect())
    }

    pub fn vertices(&self) -> &[RatVec] {
        &self.vertices
    }

    pub fn lattice_vertices(&self) -> Option<Vec<LatticeVec>> {
        self.vertices.iter().map(|v| v.to_lattice()).collect()
    }

    pub fn is_lattice(&self) -> bool {
        self.lattice_vertices().is_some()
    }

    /// Directed edges, counterclockwise.
    pub fn edges(&self) -> Vec<(RatVec, RatVec)> {
        let n = self.vertices.len();
        if n < 2 {
            return vec![];
        }
        (0..n).map(|i| (self.vertices[i].clone(), self.vertices[(i + 1) % n].clone())).collect()
    }

    pub fn contains(&self, p: &RatVec) -> bool {
        match self.vertices.len() {
            1 => self.vertices[0] == *p,
            2 => {
                let (a, b) = (&self.vertices[0], &self.vertices[1]);
                if !cross(a, b, p).is_zero() {
                    return false;
                }
                let t = (p.clone() - a.clone()).dot(&(b.clone() - a.clone()));
                !t.is_negative() && t <= (b.clone() - a.clone()).dot(&(b.clone() - a.clone()))
            }
            _ => self.edges().iter().all(|(a, b)| !cross(a, b, p).is_negative()),
        }
    }

    pub fn contains_interior(&self, p: &RatVec) -> bool {
        self.vertices.len() > 2 && self.edges().iter().all(|(a, b)| cross(a, b, p).is_positive())
    }

    pub fn scale(&self, k: &Rat) -> Self {
        if k.is_zero() {
            return Polygon { vertices: vec![Vec2::zero()] };
        }
        let mut vs: Vec<RatVec> = self.vertices.iter().map(|v| v.scale(k)).collect();
        if k.is_negative() {
            vs = convex_hull(&vs);
        }
        Polygon { vertices: vs }
    }

    pub fn map(&self, m: &UnimodularAffineMap) -> Self {
        Polygon { vertices: convex_hull(&self.vertices.iter().map(|v| m.apply(v)).collect::<Vec<_>>()) }
    }

    /// Twice the signed area; nonnegative for stored polygons.
    pub fn double_area(&self) -> Rat {
        let n = self.vertices.len();
        if n < 3 {
            return Rat::zero();
        }
        let o = &self.vertices[0];
        (1..n - 1).map(|i| cross(o, &self.vertices[i], &self.vertices[i + 1])).sum()
    }

    pub fn lattice_points(&self) -> Vec<LatticeVec> {
        let xs = self.vertices.iter().map(|v| &v.x);
        let ys = self.vertices.iter().map(|v| &v.y);
        let (x0, x1) = (ceil_i64(xs.clone().min().unwrap()), floor_i64(xs.max().unwrap()));
        let (y0, y1) = (ceil_i64(ys.clone().min().unwrap()), floor_i64(ys.max().unwrap()));
        let mut out = vec![];
        for x in x0..=x1 {
            for y in y0..=y1 {
                if self.contains(&RatVec::from_ints(x, y)) {
                    out.push(Vec2::new(x, y));
                }
            }
        }
        out
    }

    /// Lattice points on the boundary of a lattice polygon.
    pub fn boundary_lattice_count(&self) -> i64 {
        match self.vertices.len() {
            1 => i64::from(self.is_lattice()),
            _ => self.lattice_points().iter().filter(|p| !self.contains_interior(&p.to_rat())).count() as i64,
        }
    }
}

/// Lattice points of the d-fold dilation.
pub fn dilation_points(s: &Polygon, d: u32) -> Vec<LatticeVec> {
    s.scale(&rat(d as i64)).lattice_points()
}

/// Lattice length of an edge with lattice endpoints.
pub fn lattice_length(a: LatticeVec, b: LatticeVec) -> i64 {
    let v = b - a;
    v.x.gcd(&v.y)
}

impl fmt::Display for Polygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", vs.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hull_drops_interior_and_collinear() {
        let p = Polygon::from_lattice(&[(0, 0), (2, 0), (1, 0), (2, 2), (0, 2), (1, 1)]).unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.double_area(), rat(8));
    }

    #[test]
    fn dilations() {
        let sq = Polygon::from_lattice(&[(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap();
        assert_eq!(dilation_points(&sq, 2).len(), 9);
        assert_eq!(dilation_points(&sq, 0), vec![Vec2::new(0, 0)]);
        let pent = Polygon::from_lattice(&[(1, 0), (0, 1), (-1, 0), (0, -1), (1, -1)]).unwrap();
        assert_eq!(dilation_points(&pent, 1).len(), 6);
    }

    #[test]
    fn degenerate_shapes() {
        let pt = Polygon::from_lattice(&[(0, 0)]).unwrap();
        assert_eq!(pt.lattice_points(), vec![Vec2::new(0, 0)]);
        let seg = Polygon::from_lattice(&[(0, 0), (3, 3)]).unwrap();
        assert_eq!(seg.lattice_points().len(), 4);
        assert_eq!(seg.boundary_lattice_count(), 4);
    }

    proptest! {
        // Pick's theorem against brute-force counting.
        #[test]
        fn pick(pts in proptest::collection::vec((-5i64..6, -5i64..6), 3..8)) {
            let p = Polygon::from_lattice(&pts).unwrap();
            prop_assume!(p.vertices().len() >= 3);
            let total = p.lattice_points().len() as i64;
            let b = p.boundary_lattice_count();
            let lv = p.lattice_vertices().unwrap();
            let bb: i64 = (0..lv.len()).map(|i| lattice_length(lv[i], lv[(i + 1) % lv.len()])).sum();
            prop_assert_eq!(b, bb);
            prop_assert_eq!(p.double_area(), rat(2 * (total - b) + b - 2));
        }
    }
}
