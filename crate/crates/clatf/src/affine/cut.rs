use num_traits::{Signed, ToPrimitive, Zero};

use super::shear::{merge_collinear, PiecewiseShear};
use crate::error::{Error, Result};
use crate::exact::{primitive, rat, FiniteType, LatticeVec, Mat2, Rat, RatVec, UnimodularAffineMap, Vec2};
use crate::scattering::{seed_mutate, ScatteringDiagram, Seed, Variant, WallKind};

/// A branch cut: ray from `base` in `direction`. Crossing it counterclockwise
/// about the base acts on vectors by x -> x - k det(u, x) u.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cut {
    pub base: RatVec,
    pub direction: LatticeVec,
    pub shear_power: i64,
    pub frozen: bool,
}

impl Cut {
    pub fn new(base: RatVec, direction: LatticeVec, shear_power: i64) -> Result<Self> {
        if shear_power < 1 {
            return Err(Error::Invalid("shear power must be positive".into()));
        }
        Ok(Cut { base, direction: primitive(direction)?, shear_power, frozen: false })
    }

    pub fn monodromy(&self) -> Mat2 {
        Mat2::shear(self.direction, -self.shear_power)
    }

    /// Ray parameter of `p` if it lies on the cut strictly past the base.
    fn param(&self, p: &RatVec) -> Option<Rat> {
        let u = self.direction.to_rat();
        let w = p.clone() - self.base.clone();
        if !u.det(&w).is_zero() {
            return None;
        }
        let t = u.dot(&w) / u.dot(&u);
        t.is_positive().then_some(t)
    }

    fn side(&self, p: &RatVec) -> Rat {
        self.direction.to_rat().det(&(p.clone() - self.base.clone()))
    }
}

/// Rational polygon in an affine structure with cuts, plus the seed whose
/// cluster shears act on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutPolytope {
    pub vertices: Vec<RatVec>,
    pub cuts: Vec<Cut>,
    pub seed: Seed,
    pub variant: Variant,
}

fn cross(o: &RatVec, a: &RatVec, b: &RatVec) -> Rat {
    (a.clone() - o.clone()).det(&(b.clone() - o.clone()))
}

fn double_area(vs: &[RatVec]) -> Rat {
    let n = vs.len();
    (0..n).map(|i| vs[i].det(&vs[(i + 1) % n])).sum()
}

impl CutPolytope {
    pub fn new(vertices: Vec<RatVec>, cuts: Vec<Cut>, seed: Seed, variant: Variant) -> Result<Self> {
        let mut vertices = merge_collinear(vertices);
        if vertices.len() >= 3 && double_area(&vertices).is_negative() {
            vertices.reverse();
        }
        Ok(CutPolytope { vertices, cuts, seed, variant })
    }

    /// Polygon without cuts over the standard A2 seed.
    pub fn plain(points: &[(i64, i64)]) -> Result<Self> {
        Self::new(
            points.iter().map(|&(x, y)| RatVec::from_ints(x, y)).collect(),
            vec![],
            Seed::standard(FiniteType::A2),
            Variant::X,
        )
    }

    pub fn with_cut(mut self, cut: Cut) -> Self {
        self.cuts.push(cut);
        self
    }

    /// Twice the enclosed area.
    pub fn double_area(&self) -> Rat {
        if self.vertices.len() < 3 {
            return Rat::zero();
        }
        double_area(&self.vertices)
    }

    /// Vertex set, sorted, for comparison up to rotation of the cycle.
    pub fn vertex_set(&self) -> Vec<RatVec> {
        let mut v = self.vertices.clone();
        v.sort();
        v
    }

    /// Boundary-inclusive membership for a simple, possibly nonconvex, polygon.
    pub fn contains(&self, p: &RatVec) -> bool {
        let vs = &self.vertices;
        let n = vs.len();
        let mut inside = false;
        for i in 0..n {
            let a = &vs[i];
            let b = &vs[(i + 1) % n];
            if cross(a, b, p).is_zero() {
                let t = (p.clone() - a.clone()).dot(&(b.clone() - a.clone()));
                if !t.is_negative() && t <= (b.clone() - a.clone()).dot(&(b.clone() - a.clone())) {
                    return true;
                }
            }
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x.clone() + (p.y.clone() - a.y.clone()) * (b.x.clone() - a.x.clone()) / (b.y.clone() - a.y.clone());
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    pub fn lattice_points(&self) -> Vec<LatticeVec> {
        self.dilation_points(1)
    }

    /// Lattice points of the d-fold dilation about the origin.
    pub fn dilation_points(&self, d: u32) -> Vec<LatticeVec> {
        let k = rat(d as i64);
        let scaled = CutPolytope { vertices: self.vertices.iter().map(|v| v.scale(&k)).collect(), ..self.clone() };
        let bound = |f: fn(&Rat) -> Rat, pick: fn(&RatVec) -> &Rat, lo: bool| {
            let it = scaled.vertices.iter().map(pick);
            let e = if lo { it.min() } else { it.max() };
            f(e.expect("nonempty")).to_integer().to_i64().expect("coordinate fits in i64")
        };
        let (x0, x1) = (bound(Rat::ceil, |v| &v.x, true), bound(Rat::floor, |v| &v.x, false));
        let (y0, y1) = (bound(Rat::ceil, |v| &v.y, true), bound(Rat::floor, |v| &v.y, false));
        let mut out = vec![];
        for x in x0..=x1 {
            for y in y0..=y1 {
                if scaled.contains(&RatVec::from_ints(x, y)) {
                    out.push(Vec2::new(x, y));
                }
            }
        }
        out
    }

    /// Image under a global unimodular map; cut powers are conjugation invariant.
    pub fn map(&self, m: &UnimodularAffineMap) -> Result<Self> {
        let lin = m.matrix();
        let cuts = self
            .cuts
            .iter()
            .map(|c| Ok(Cut { base: m.apply(&c.base), direction: primitive(lin.apply(c.direction))?, ..c.clone() }))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.vertices.iter().map(|v| m.apply(v)).collect(), cuts, self.seed.clone(), self.variant)
    }

    /// Apply a piecewise shear to the vertices and transport the cuts.
    pub fn apply_shear(&self, s: &PiecewiseShear) -> Result<Self> {
        let cuts = self
            .cuts
            .iter()
            .map(|c| Ok(Cut { base: s.apply(&c.base), direction: primitive(s.transport_direction(&c.base, c.direction))?, ..c.clone() }))
            .collect::<Result<Vec<_>>>()?;
        Ok(CutPolytope { vertices: s.polygon(&self.vertices), cuts, seed: self.seed.clone(), variant: self.variant })
    }
}

/// Image under the cluster shear T_k of the current seed; the seed is mutated alongside.
pub fn mutate_polytope(p: &CutPolytope, k: usize) -> Result<CutPolytope> {
    let t = p.seed.cluster_shear(k, p.variant)?;
    let s = PiecewiseShear::new(Vec2::zero(), t.n, t.v)?;
    let mut out = p.apply_shear(&s)?;
    out.seed = seed_mutate(&p.seed, k)?;
    Ok(out)
}

/// Alternating mutations from `start`; returns the first step at which the
/// vertex set equals the initial one, if it happens within `max_steps`.
pub fn first_return(p: &CutPolytope, start: usize, max_steps: usize) -> Result<Option<usize>> {
    let target = p.vertex_set();
    let mut q = p.clone();
    let mut k = start;
    for step in 1..=max_steps {
        q = mutate_polytope(&q, k)?;
        k = 1 - k;
        if q.vertex_set() == target {
            return Ok(Some(step));
        }
    }
    Ok(None)
}

/// Turn at a boundary point where the cut is crossed, after moving the
/// vector on the clockwise side into the chart of the other side.
fn glued_turn(cut: &Cut, a: &RatVec, b: &RatVec, a_side: &Rat) -> Rat {
    let m = cut.monodromy();
    if a_side.is_negative() {
        m.apply_rat(a).det(b)
    } else {
        a.det(&m.apply_rat(b))
    }
}

/// Convexity in every affine chart. Requires counterclockwise vertices.
pub fn chartwise_convex(p: &CutPolytope) -> Result<bool> {
    let vs = &p.vertices;
    let n = vs.len();
    if n < 3 {
        return Ok(true);
    }
    if !double_area(vs).is_positive() {
        return Err(Error::BadPolygon("vertices must be counterclockwise".into()));
    }
    for i in 0..n {
        let prev = &vs[(i + n - 1) % n];
        let cur = &vs[i];
        let next = &vs[(i + 1) % n];
        let a = cur.clone() - prev.clone();
        let b = next.clone() - cur.clone();
        let mut turn = a.det(&b);
        let mut a_glued = a.clone();
        for cut in &p.cuts {
            if cut.param(cur).is_none() {
                continue;
            }
            let (sa, sb) = (cut.side(prev), cut.side(next));
            if sa.is_zero() || sb.is_zero() || sa.is_positive() == sb.is_positive() {
                return Err(Error::CutTangent);
            }
            turn = glued_turn(cut, &a_glued, &b, &sa);
            if sa.is_negative() {
                a_glued = cut.monodromy().apply_rat(&a_glued);
            }
        }
        if turn.is_negative() {
            return Ok(false);
        }
        // cuts crossing the open edge cur -> next
        for cut in &p.cuts {
            let (sa, sb) = (cut.side(cur), cut.side(next));
            if sa.is_zero() && sb.is_zero() {
                let on = |x: &RatVec| cut.param(x).is_some();
                if on(cur) || on(next) || on(&cur.midpoint(next)) {
                    return Err(Error::CutTangent);
                }
                continue;
            }
            if sa.is_zero() || sb.is_zero() || sa.is_positive() == sb.is_positive() {
                continue;
            }
            let t = sa.clone() / (sa.clone() - sb);
            let x = cur.clone() + b.scale(&t);
            if cut.param(&x).is_some() && glued_turn(cut, &b, &b, &sa).is_negative() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// [`chartwise_convex`] after checking that every wall of `d` is outgoing.
pub fn chartwise_convex_for(p: &CutPolytope, d: &ScatteringDiagram) -> Result<bool> {
    if d.walls.iter().any(|w| w.kind() == WallKind::Incoming) {
        return Err(Error::Invalid("diagram has incoming walls".into()));
    }
    chartwise_convex(p)
}
