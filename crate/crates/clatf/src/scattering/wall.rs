use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{
    primitive, series_pow_binomial, Grading, Laurent, LatticeVec, Mat2, Rat, RatFunc, RatVec, TruncatedSeries,
    UnimodularAffineMap, Vec2,
};

/// Where a wall lives in the plane.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Support {
    Line { point: RatVec, dir: LatticeVec },
    Ray { base: RatVec, dir: LatticeVec },
    /// From `start` along `dir` until `end`.
    Segment { start: RatVec, end: RatVec, dir: LatticeVec },
}

impl Support {
    pub fn ray(base: RatVec, dir: LatticeVec) -> Result<Self> {
        Ok(Support::Ray { base, dir: primitive(dir)? })
    }

    pub fn line(point: RatVec, dir: LatticeVec) -> Result<Self> {
        Ok(Support::Line { point, dir: primitive(dir)? })
    }

    pub fn segment(start: RatVec, end: RatVec) -> Result<Self> {
        let dir = (end.clone() - start.clone()).primitive_direction()?;
        Ok(Support::Segment { start, end, dir })
    }

    pub fn dir(&self) -> LatticeVec {
        match self {
            Support::Line { dir, .. } | Support::Ray { dir, .. } | Support::Segment { dir, .. } => *dir,
        }
    }

    pub fn anchor(&self) -> &RatVec {
        match self {
            Support::Line { point, .. } => point,
            Support::Ray { base, .. } => base,
            Support::Segment { start, .. } => start,
        }
    }

    /// Parameter range (in units of `dir`) measured from the anchor.
    fn range(&self) -> (Option<Rat>, Option<Rat>) {
        match self {
            Support::Line { .. } => (None, None),
            Support::Ray { .. } => (Some(Rat::zero()), None),
            Support::Segment { start, end, dir } => (Some(Rat::zero()), Some(param(start, end, *dir))),
        }
    }

    /// Parameter of a point on the support line, or None when off the line.
    pub fn param_of(&self, p: &RatVec) -> Option<Rat> {
        let d = self.dir().to_rat();
        let w = p.clone() - self.anchor().clone();
        if !d.det(&w).is_zero() {
            return None;
        }
        Some(d.dot(&w) / d.dot(&d))
    }

    pub fn contains(&self, p: &RatVec) -> bool {
        match self.param_of(p) {
            None => false,
            Some(t) => {
                let (lo, hi) = self.range();
                lo.is_none_or(|l| t >= l) && hi.is_none_or(|h| t <= h)
            }
        }
    }

    pub fn point_at(&self, t: &Rat) -> RatVec {
        self.anchor().clone() + self.dir().to_rat() * t.clone()
    }

    /// Directions of the pieces of this support emanating from `p`.
    pub fn arms_at(&self, p: &RatVec) -> Vec<LatticeVec> {
        let Some(t) = self.param_of(p) else { return vec![] };
        let (lo, hi) = self.range();
        let d = self.dir();
        let mut out = vec![];
        if hi.as_ref().is_none_or(|h| t < *h) && lo.as_ref().is_none_or(|l| t >= *l) {
            out.push(d);
        }
        if lo.as_ref().is_none_or(|l| t > *l) && hi.as_ref().is_none_or(|h| t <= *h) {
            out.push(-d);
        }
        out
    }

    /// Intersection point of two non-parallel supports, if it lies on both.
    pub fn intersect(&self, o: &Support) -> Option<RatVec> {
        let d1 = self.dir().to_rat();
        let d2 = o.dir().to_rat();
        let den = d1.det(&d2);
        if den.is_zero() {
            return None;
        }
        let w = o.anchor().clone() - self.anchor().clone();
        let t = w.det(&d2) / den;
        let p = self.point_at(&t);
        (self.contains(&p) && o.contains(&p)).then_some(p)
    }

    /// Endpoints that are junction candidates.
    pub fn endpoints(&self) -> Vec<RatVec> {
        match self {
            Support::Line { .. } => vec![],
            Support::Ray { base, .. } => vec![base.clone()],
            Support::Segment { start, end, .. } => vec![start.clone(), end.clone()],
        }
    }

    pub fn map(&self, m: &UnimodularAffineMap) -> Self {
        let l = m.matrix();
        match self {
            Support::Line { point, dir } => Support::Line { point: m.apply(point), dir: l.apply(*dir) },
            Support::Ray { base, dir } => Support::Ray { base: m.apply(base), dir: l.apply(*dir) },
            Support::Segment { start, end, dir } => Support::Segment { start: m.apply(start), end: m.apply(end), dir: l.apply(*dir) },
        }
    }
}

fn param(a: &RatVec, b: &RatVec, dir: LatticeVec) -> Rat {
    let d = dir.to_rat();
    d.dot(&(b.clone() - a.clone())) / d.dot(&d)
}

/// Product of factors (1 + z^{k b})^{c_k} along one primitive exponent b.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WallFunction {
    base: LatticeVec,
    factors: BTreeMap<u32, i64>,
}

impl WallFunction {
    pub fn binomial_power(exponent: LatticeVec, power: i64) -> Result<Self> {
        let g = crate::exact::divisibility_index(exponent)?;
        let mut w = WallFunction { base: primitive(exponent)?, factors: BTreeMap::new() };
        w.multiply_factor(g as u32, power);
        Ok(w)
    }

    pub fn from_factors(base: LatticeVec, factors: BTreeMap<u32, i64>) -> Result<Self> {
        let mut w = WallFunction { base: primitive(base)?, factors: BTreeMap::new() };
        for (k, c) in factors {
            w.multiply_factor(k, c);
        }
        Ok(w)
    }

    pub fn multiply_factor(&mut self, k: u32, c: i64) {
        let e = self.factors.entry(k).or_insert(0);
        *e += c;
        if *e == 0 {
            self.factors.remove(&k);
        }
    }

    pub fn base(&self) -> LatticeVec {
        self.base
    }

    pub fn factors(&self) -> &BTreeMap<u32, i64> {
        &self.factors
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// f^e as a truncated series.
    pub fn series_pow(&self, e: i64, grading: Grading, order: u32) -> Result<TruncatedSeries> {
        let mut s = TruncatedSeries::one(grading, order);
        for (k, c) in &self.factors {
            let m = self.base * (*k as i64);
            s = s.mul(&series_pow_binomial(m, c * e, order, grading)?)?;
        }
        Ok(s)
    }

    /// f^e as an exact rational function.
    pub fn rat_pow(&self, e: i64) -> RatFunc {
        let mut num = Laurent::one();
        let mut den = Laurent::one();
        for (k, c) in &self.factors {
            let p = Laurent::binomial(self.base * (*k as i64));
            let x = c * e;
            if x >= 0 {
                num = num.mul(&p.pow(x as u32));
            } else {
                den = den.mul(&p.pow((-x) as u32));
            }
        }
        RatFunc { num, den }
    }

    /// The expanded polynomial when all factor powers are non-negative.
    pub fn polynomial(&self) -> Option<Laurent> {
        let r = self.rat_pow(1);
        r.den.is_one().then_some(r.num)
    }

    /// Coefficients c_j of z^{j b} in the expansion, up to grading `order`.
    pub fn coefficients(&self, grading: Grading, order: u32) -> Result<Vec<(LatticeVec, BigInt)>> {
        Ok(self.series_pow(1, grading, order)?.terms().iter().map(|(m, c)| (*m, c.clone())).collect())
    }

    pub fn map_exponents(&self, l: &Mat2) -> Self {
        WallFunction { base: l.apply(self.base), factors: self.factors.clone() }
    }

    pub fn max_multiple(&self) -> u32 {
        self.factors.keys().copied().max().unwrap_or(0)
    }
}

impl fmt::Display for WallFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        for (k, c) in &self.factors {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            let m = self.base * (*k as i64);
            write!(f, "(1 + z^({},{}))", m.x, m.y)?;
            if *c != 1 {
                write!(f, "^{c}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WallKind {
    Incoming,
    Outgoing,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Wall {
    pub support: Support,
    pub normal: LatticeVec,
    pub function: WallFunction,
}

impl Wall {
    pub fn new(support: Support, function: WallFunction) -> Result<Self> {
        let d = support.dir();
        if !d.det(&function.base()).is_zero() && !function.is_trivial() {
            return Err(Error::Invalid("wall exponent must lie along the support".into()));
        }
        let normal = Vec2::new(d.y, -d.x);
        Ok(Wall { support, normal, function })
    }

    pub fn kind(&self) -> WallKind {
        match &self.support {
            Support::Line { .. } => WallKind::Incoming,
            _ => {
                if self.support.dir().same_ray(&self.function.base()) {
                    WallKind::Incoming
                } else {
                    WallKind::Outgoing
                }
            }
        }
    }

    /// Sign making `normal` the counterclockwise-crossing normal of an arm in direction `r`.
    pub fn crossing_sign(&self, r: LatticeVec) -> i64 {
        let n = Vec2::new(r.y, -r.x);
        if n == self.normal {
            1
        } else {
            -1
        }
    }
}

/// A focus-focus point: monodromy about `position`, fixing `invariant_direction`,
/// with a branch cut ray leaving in direction `cut`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SingularPoint {
    pub position: RatVec,
    pub monodromy: UnimodularAffineMap,
    pub invariant_direction: LatticeVec,
    pub cut: LatticeVec,
}

impl SingularPoint {
    /// Linear part `linear` acting on exponents when the cut is crossed counterclockwise.
    pub fn new(position: RatVec, linear: Mat2, cut: LatticeVec) -> Result<Self> {
        let invariant_direction = linear.shear_axis().ok_or_else(|| Error::Invalid("monodromy is not a shear".into()))?;
        let monodromy = UnimodularAffineMap::about(linear, &position)?;
        Ok(SingularPoint { position, monodromy, invariant_direction, cut: primitive(cut)? })
    }

    pub fn linear(&self) -> Mat2 {
        self.monodromy.matrix()
    }

    pub fn cut_support(&self) -> Support {
        Support::Ray { base: self.position.clone(), dir: self.cut }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat_vec, ratio};

    #[test]
    fn support_geometry() {
        let r = Support::ray(rat_vec(1, 0), Vec2::new(-1, 0)).unwrap();
        assert!(r.contains(&rat_vec(0, 0)));
        assert!(!r.contains(&rat_vec(2, 0)));
        assert_eq!(r.arms_at(&rat_vec(1, 0)), vec![Vec2::new(-1, 0)]);
        assert_eq!(r.arms_at(&rat_vec(0, 0)).len(), 2);
        let s = Support::segment(rat_vec(3, 0), rat_vec(0, 0)).unwrap();
        assert_eq!(s.arms_at(&rat_vec(0, 0)), vec![Vec2::new(1, 0)]);
        let l = Support::line(rat_vec(0, 0), Vec2::new(0, 2)).unwrap();
        assert_eq!(r.intersect(&l), Some(rat_vec(0, 0)));
        let d = Support::ray(rat_vec(0, 0), Vec2::new(1, 1)).unwrap();
        assert_eq!(d.intersect(&Support::line(Vec2::new(ratio(1, 2), ratio(0, 1)), Vec2::new(0, 1)).unwrap()), Some(Vec2::new(ratio(1, 2), ratio(1, 2))));
    }

    #[test]
    fn wall_kinds() {
        let f = WallFunction::binomial_power(Vec2::new(1, 0), 1).unwrap();
        let out = Wall::new(Support::ray(rat_vec(0, 0), Vec2::new(-1, 0)).unwrap(), f.clone()).unwrap();
        assert_eq!(out.kind(), WallKind::Outgoing);
        let inc = Wall::new(Support::ray(rat_vec(0, 0), Vec2::new(1, 0)).unwrap(), f).unwrap();
        assert_eq!(inc.kind(), WallKind::Incoming);
    }

    #[test]
    fn factored_functions() {
        let f = WallFunction::binomial_power(Vec2::new(-2, 0), 1).unwrap();
        assert_eq!(f.base(), Vec2::new(-1, 0));
        assert_eq!(f.factors().get(&2), Some(&1));
        assert_eq!(f.polynomial().unwrap(), Laurent::binomial(Vec2::new(-2, 0)));
        assert_eq!(f.to_string(), "(1 + z^(-2,0))");
    }
}
