use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{LatticeVec, Mat2, Rat, RatVec};

/// x -> x + [<n, x - c>]_+ v with <n, v> = 0: identity on one closed half-plane,
/// a lattice shear on the other. Shared by polytope and ATBD mutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseShear {
    pub center: RatVec,
    pub n: LatticeVec,
    pub v: LatticeVec,
}

fn cross(o: &RatVec, a: &RatVec, b: &RatVec) -> Rat {
    (a.clone() - o.clone()).det(&(b.clone() - o.clone()))
}

/// Drops repeated points and vertices lying on the segment through their neighbours.
pub fn merge_collinear(mut pts: Vec<RatVec>) -> Vec<RatVec> {
    loop {
        let n = pts.len();
        if n < 3 {
            pts.dedup();
            return pts;
        }
        let hit = (0..n).find(|&i| {
            let a = &pts[(i + n - 1) % n];
            let c = &pts[(i + 1) % n];
            cross(a, &pts[i], c).is_zero()
        });
        match hit {
            Some(i) => {
                pts.remove(i);
            }
            None => return pts,
        }
    }
}

impl PiecewiseShear {
    pub fn new(center: RatVec, n: LatticeVec, v: LatticeVec) -> Result<Self> {
        if n.dot(&v) != 0 {
            return Err(Error::ShearNotFixed);
        }
        Ok(PiecewiseShear { center, n, v })
    }

    /// Signed height <n, x - c>.
    pub fn height(&self, x: &RatVec) -> Rat {
        self.n.to_rat().dot(&(x.clone() - self.center.clone()))
    }

    pub fn apply(&self, x: &RatVec) -> RatVec {
        let h = self.height(x);
        if h.is_positive() {
            x.clone() + self.v.to_rat().scale(&h)
        } else {
            x.clone()
        }
    }

    pub fn inverse(&self) -> Self {
        PiecewiseShear { center: self.center.clone(), n: self.n, v: -self.v }
    }

    /// Linear part on the sheared side.
    pub fn linear(&self) -> Mat2 {
        let (n, v) = (self.n, self.v);
        Mat2([[1 + v.x * n.x, v.x * n.y], [v.y * n.x, 1 + v.y * n.y]])
    }

    /// Linear part acting on a direction leaving `x`.
    pub fn linear_at(&self, x: &RatVec, dir: LatticeVec) -> Mat2 {
        let h = self.height(x);
        if h.is_positive() || (h.is_zero() && self.n.dot(&dir) > 0) {
            self.linear()
        } else {
            Mat2::IDENTITY
        }
    }

    pub fn transport_direction(&self, x: &RatVec, dir: LatticeVec) -> LatticeVec {
        self.linear_at(x, dir).apply(dir)
    }

    /// Image of a closed polygonal loop: edges crossing the fold line are
    /// split there, and collinear vertices are merged afterwards.
    pub fn polygon(&self, vertices: &[RatVec]) -> Vec<RatVec> {
        let n = vertices.len();
        let mut out = Vec::with_capacity(n + 2);
        for i in 0..n {
            let a = &vertices[i];
            let b = &vertices[(i + 1) % n];
            out.push(self.apply(a));
            let (ha, hb) = (self.height(a), self.height(b));
            if (ha.is_positive() && hb.is_negative()) || (ha.is_negative() && hb.is_positive()) {
                let t = ha.clone() / (ha - hb);
                let c = a.clone() + (b.clone() - a.clone()).scale(&t);
                out.push(self.apply(&c));
            }
        }
        merge_collinear(out)
    }
}
