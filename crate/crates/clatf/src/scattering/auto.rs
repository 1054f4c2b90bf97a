use std::collections::HashMap;

use super::wall::WallFunction;
use crate::error::{Error, Result};
use crate::exact::{Grading, Laurent, LatticeVec, Mat2, RatFunc, TruncatedSeries, Vec2};

/// z^m -> z^m g1^{m.x} g2^{m.y}, truncated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingAutomorphism {
    pub g: [TruncatedSeries; 2],
}

impl RingAutomorphism {
    pub fn identity(grading: Grading, order: u32) -> Self {
        let one = TruncatedSeries::one(grading, order);
        RingAutomorphism { g: [one.clone(), one] }
    }

    pub fn is_identity(&self) -> bool {
        self.g.iter().all(|s| s.is_one())
    }

    fn grading(&self) -> Grading {
        self.g[0].grading()
    }

    fn order(&self) -> u32 {
        self.g[0].order()
    }

    /// Apply to a series: sum c_m z^m g1^{m.x} g2^{m.y}.
    pub fn apply(&self, s: &TruncatedSeries) -> Result<TruncatedSeries> {
        let mut cache: [HashMap<i64, TruncatedSeries>; 2] = [HashMap::new(), HashMap::new()];
        let mut out = TruncatedSeries::zero(self.grading(), self.order());
        for (m, c) in s.terms() {
            let mut t = TruncatedSeries::monomial(self.grading(), self.order(), *m, c.clone());
            for (j, e) in [m.x, m.y].into_iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !cache[j].contains_key(&e) {
                    let p = self.g[j].pow(e)?;
                    cache[j].insert(e, p);
                }
                t = t.mul(&cache[j][&e])?;
            }
            out = out.add(&t)?;
        }
        Ok(out)
    }

    /// self after inner.
    pub fn compose(&self, inner: &RingAutomorphism) -> Result<RingAutomorphism> {
        let mut g = self.g.clone();
        for (j, gj) in g.iter_mut().enumerate() {
            *gj = self.apply(&inner.g[j])?.mul(&self.g[j])?;
        }
        Ok(RingAutomorphism { g })
    }

    /// Image of z^m divided by z^m.
    pub fn image_ratio(&self, m: LatticeVec) -> Result<TruncatedSeries> {
        self.g[0].pow(m.x)?.mul(&self.g[1].pow(m.y)?)
    }
}

/// z^m -> z^m f^{sign <n,m>}.
pub fn crossing_automorphism(
    f: &WallFunction,
    n: LatticeVec,
    sign: i64,
    grading: Grading,
    order: u32,
) -> Result<RingAutomorphism> {
    Ok(RingAutomorphism { g: [f.series_pow(sign * n.x, grading, order)?, f.series_pow(sign * n.y, grading, order)?] })
}

/// Apply a single crossing to a series, grouping terms by <n,m>.
pub fn apply_crossing(
    s: &TruncatedSeries,
    f: &WallFunction,
    n: LatticeVec,
    sign: i64,
    cache: &mut HashMap<i64, TruncatedSeries>,
) -> Result<TruncatedSeries> {
    let mut out = TruncatedSeries::zero(s.grading(), s.order());
    let mut groups: HashMap<i64, TruncatedSeries> = HashMap::new();
    for (m, c) in s.terms() {
        let e = sign * n.dot(m);
        groups
            .entry(e)
            .or_insert_with(|| TruncatedSeries::zero(s.grading(), s.order()))
            .add_term(*m, c.clone());
    }
    for (e, part) in groups {
        if e == 0 {
            out = out.add(&part)?;
            continue;
        }
        if !cache.contains_key(&e) {
            cache.insert(e, f.series_pow(e, s.grading(), s.order())?);
        }
        out = out.add(&part.mul(&cache[&e])?)?;
    }
    Ok(out)
}

/// Exact automorphism z^m -> z^{Lm} g1^{m.x} g2^{m.y} with rational g.
#[derive(Clone, Debug)]
pub struct ExactAutomorphism {
    pub linear: Mat2,
    pub g: [RatFunc; 2],
}

impl ExactAutomorphism {
    pub fn identity() -> Self {
        ExactAutomorphism { linear: Mat2::IDENTITY, g: [RatFunc::one(), RatFunc::one()] }
    }

    pub fn crossing(f: &WallFunction, n: LatticeVec, sign: i64) -> Self {
        ExactAutomorphism { linear: Mat2::IDENTITY, g: [f.rat_pow(sign * n.x), f.rat_pow(sign * n.y)] }
    }

    pub fn monomial_map(l: Mat2) -> Self {
        ExactAutomorphism { linear: l, g: [RatFunc::one(), RatFunc::one()] }
    }

    /// z^{e_j} -> z^{e_j} for both generators; monomial factors of g may absorb the linear part.
    pub fn is_identity(&self) -> bool {
        (0..2).all(|j| self.generator_ratio(j).is_one())
    }

    /// theta(z^{e_j}) / z^{e_j}.
    pub fn generator_ratio(&self, j: usize) -> RatFunc {
        let e = if j == 0 { Vec2::new(1, 0) } else { Vec2::new(0, 1) };
        let shift = self.linear.apply(e) - e;
        RatFunc { num: self.g[j].num.shift(shift), den: self.g[j].den.clone() }
    }

    /// Image of a Laurent polynomial, over a common denominator.
    pub fn apply_poly(&self, p: &Laurent) -> RatFunc {
        if p.is_zero() {
            return RatFunc::from_poly(Laurent::zero());
        }
        let mut hi = [0i64; 2];
        let mut lo = [0i64; 2];
        for m in p.terms().keys() {
            for (j, e) in [m.x, m.y].into_iter().enumerate() {
                hi[j] = hi[j].max(e);
                lo[j] = lo[j].min(e);
            }
        }
        let mut den = Laurent::one();
        for j in 0..2 {
            den = den.mul(&self.g[j].den.pow(hi[j] as u32)).mul(&self.g[j].num.pow((-lo[j]) as u32));
        }
        let mut num = Laurent::zero();
        let mut cache: HashMap<(usize, i64), Laurent> = HashMap::new();
        for (m, c) in p.terms() {
            let mut t = Laurent::monomial(self.linear.apply(*m), c.clone());
            for (j, e) in [m.x, m.y].into_iter().enumerate() {
                let keys = [(0usize, e.max(0)), (1, hi[j] - e.max(0)), (2, (-e).max(0)), (3, -lo[j] - (-e).max(0))];
                for (kind, k) in keys {
                    if k == 0 {
                        continue;
                    }
                    let key = (j * 4 + kind, k);
                    let f = cache.entry(key).or_insert_with(|| {
                        let base = match kind {
                            0 | 3 => &self.g[j].num,
                            _ => &self.g[j].den,
                        };
                        base.pow(k as u32)
                    });
                    t = t.mul(f);
                }
            }
            num = num.add(&t);
        }
        RatFunc { num, den }
    }

    pub fn apply_rat(&self, r: &RatFunc) -> RatFunc {
        let a = self.apply_poly(&r.num);
        let b = self.apply_poly(&r.den);
        a.mul(&b.inv())
    }

    /// self after inner.
    pub fn compose(&self, inner: &ExactAutomorphism) -> ExactAutomorphism {
        let mut g = inner.g.clone();
        for (j, gj) in g.iter_mut().enumerate() {
            let le = inner.linear.apply(if j == 0 { Vec2::new(1, 0) } else { Vec2::new(0, 1) });
            let mono = self.g[0].pow(le.x).mul(&self.g[1].pow(le.y));
            *gj = self.apply_rat(gj).mul(&mono);
        }
        ExactAutomorphism { linear: self.linear * inner.linear, g }
    }

    /// Laurent image of z^m when the denominators divide out, else an error.
    pub fn image_of(&self, m: LatticeVec) -> Result<RatFunc> {
        let r = self.g[0].pow(m.x).mul(&self.g[1].pow(m.y));
        if r.den.is_zero() {
            return Err(Error::Invalid("zero denominator".into()));
        }
        Ok(RatFunc { num: r.num.shift(self.linear.apply(m)), den: r.den })
    }
}
