use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::fan::{BendCache, Fan};
use crate::error::{Error, Result};
use crate::exact::{Laurent, LatticeVec, Rat, RatVec, Vec2};
use crate::scattering::{ScatteringDiagram, Support};

/// Search limits: `degree` bounds the grading gained through bends, `bends` their number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BrokenLineCaps {
    pub degree: u32,
    pub bends: usize,
}

impl Default for BrokenLineCaps {
    fn default() -> Self {
        BrokenLineCaps { degree: 24, bends: 48 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BrokenSegment {
    pub coeff: BigInt,
    pub exponent: LatticeVec,
    /// None for the unbounded initial piece.
    pub start: Option<RatVec>,
    pub end: RatVec,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BrokenLine {
    pub initial_exponent: LatticeVec,
    pub endpoint: RatVec,
    pub segments: Vec<BrokenSegment>,
}

impl BrokenLine {
    pub fn final_exponent(&self) -> LatticeVec {
        self.segments.last().expect("nonempty").exponent
    }

    pub fn final_coeff(&self) -> &BigInt {
        &self.segments.last().expect("nonempty").coeff
    }

    pub fn bends(&self) -> usize {
        self.segments.len() - 1
    }
}

fn not_generic() -> Error {
    Error::NotGeneric
}

/// Walls hit first by the ray x + t m, t > 0, with the hit point.
fn first_hits(d: &ScatteringDiagram, x: &RatVec, m: LatticeVec) -> Result<Option<(RatVec, Vec<usize>)>> {
    let mr = m.to_rat();
    let mut best: Option<(Rat, Vec<usize>)> = None;
    for (i, w) in d.walls.iter().enumerate() {
        let dir = w.support.dir().to_rat();
        let den = mr.det(&dir);
        let t = if den.is_zero() {
            if w.support.param_of(x).is_some() {
                let ahead = Support::ray(x.clone(), m)?;
                let overlaps = w.support.contains(x)
                    || w.support.endpoints().iter().any(|e| ahead.contains(e))
                    || matches!(w.support, Support::Line { .. });
                if overlaps {
                    return Err(not_generic());
                }
            }
            continue;
        } else {
            (w.support.anchor().clone() - x.clone()).det(&dir) / den
        };
        if !t.is_positive() {
            continue;
        }
        let y = x.clone() + mr.clone() * t.clone();
        if !w.support.contains(&y) {
            continue;
        }
        match &mut best {
            Some((bt, ws)) if *bt == t => ws.push(i),
            Some((bt, _)) if *bt < t => {}
            _ => best = Some((t, vec![i])),
        }
    }
    let Some((t, ws)) = best else { return Ok(None) };
    let y = x.clone() + mr * t;
    let dir0 = d.walls[ws[0]].support.dir();
    for w in ws.iter().map(|&i| &d.walls[i]) {
        if w.support.endpoints().contains(&y) || w.support.dir().det(&dir0) != 0 {
            return Err(not_generic());
        }
    }
    Ok(Some((y, ws)))
}


pub(crate) fn check_endpoint(d: &ScatteringDiagram, q: &RatVec) -> Result<()> {
    if !d.singular_points.is_empty() {
        return Err(Error::Invalid("broken lines need a diagram without singular points".into()));
    }
    if d.walls.iter().any(|w| w.support.contains(q)) {
        return Err(not_generic());
    }
    for w in &d.walls {
        if !w.function.is_trivial() && d.grading.numerator(w.function.base()) <= 0 {
            return Err(Error::Invalid("wall exponent not positive for the grading".into()));
        }
    }
    Ok(())
}

/// Exponents reachable from zero by adding wall exponents, within the budget.
fn bend_sums(d: &ScatteringDiagram, budget: i64) -> BTreeSet<LatticeVec> {
    let bases: BTreeSet<LatticeVec> =
        d.walls.iter().filter(|w| !w.function.is_trivial()).map(|w| w.function.base()).collect();
    let mut seen = BTreeSet::from([Vec2::zero()]);
    let mut frontier = vec![Vec2::zero()];
    while let Some(e) = frontier.pop() {
        for b in &bases {
            let f = e + *b;
            if d.grading.numerator(f) <= budget && seen.insert(f) {
                frontier.push(f);
            }
        }
    }
    seen
}

struct Search<'a, 'c> {
    d: &'a ScatteringDiagram,
    cache: &'c mut BendCache,
    fan: Option<Fan>,
    p: LatticeVec,
    caps: BrokenLineCaps,
    out: Vec<BrokenLine>,
}

impl Search<'_, '_> {
    /// Whether some completion exists from `y` with exponent `m`; always true off a fan.
    fn viable(&mut self, y: &RatVec, m: LatticeVec, bends: usize) -> Result<bool> {
        let Some(fan) = &self.fan else { return Ok(true) };
        let w = match fan.index_of(y) {
            Some(k) => self.cache.weight(self.d, fan, self.p, self.caps, k, m, bends)?,
            None => {
                let next = fan.next(y, m)?;
                self.cache.weight_from(self.d, fan, self.p, self.caps, next, m, bends)?
            }
        };
        Ok(!w.is_zero())
    }

    /// `rev` holds segments from the endpoint backwards; the head is being extended from `x`.
    fn walk(&mut self, x: RatVec, m: LatticeVec, end: &RatVec, rev: &mut Vec<BrokenSegment>) -> Result<()> {
        let budget = self.d.grading.numerator(m) - self.d.grading.numerator(self.p);
        if budget < 0 {
            return Ok(());
        }
        match first_hits(self.d, &x, m)? {
            None => {
                if m == self.p {
                    let mut segments = vec![BrokenSegment { coeff: BigInt::one(), exponent: m, start: None, end: end.clone() }];
                    for r in rev.iter().rev() {
                        let c = segments.last().expect("nonempty").coeff.clone() * &r.coeff;
                        segments.push(BrokenSegment { coeff: c, ..r.clone() });
                    }
                    self.out.push(BrokenLine { initial_exponent: self.p, endpoint: Vec2::zero(), segments });
                }
                Ok(())
            }
            Some((y, ws)) => {
                let bends = rev.len();
                let cap = self.caps.degree as i64 * self.d.grading.den;
                let exp = self.cache.expansion(self.d, &ws, m, cap)?;
                for (_, e, c) in exp.terms.iter().take_while(|t| t.0 <= budget) {
                    let e = *e;
                    if e.is_zero() {
                        if self.viable(&y, m, bends)? {
                            self.walk(y.clone(), m, end, rev)?;
                        }
                        continue;
                    }
                    if bends >= self.caps.bends {
                        continue;
                    }
                    if !self.viable(&y, m - e, bends + 1)? {
                        continue;
                    }
                    rev.push(BrokenSegment { coeff: c.clone(), exponent: m, start: Some(y.clone()), end: end.clone() });
                    self.walk(y.clone(), m - e, &y, rev)?;
                    rev.pop();
                }
                Ok(())
            }
        }
    }
}

/// All broken lines for `p` ending at `q`, within the caps, in sorted order.
pub fn enumerate_broken_lines(d: &ScatteringDiagram, p: LatticeVec, q: &RatVec, caps: BrokenLineCaps) -> Result<Vec<BrokenLine>> {
    enumerate_with_cache(d, p, q, caps, &mut BendCache::default())
}

pub fn enumerate_with_cache(
    d: &ScatteringDiagram,
    p: LatticeVec,
    q: &RatVec,
    caps: BrokenLineCaps,
    cache: &mut BendCache,
) -> Result<Vec<BrokenLine>> {
    if p.is_zero() {
        return Err(Error::ZeroVector);
    }
    check_endpoint(d, q)?;
    let budget = caps.degree as i64 * d.grading.den;
    let mut search = Search { d, cache, fan: Fan::of(d), p, caps, out: vec![] };
    for e in bend_sums(d, budget) {
        if search.viable(q, p + e, 0)? {
            search.walk(q.clone(), p + e, q, &mut vec![])?;
        }
    }
    let mut out = search.out;
    for l in &mut out {
        l.endpoint = q.clone();
    }
    out.sort();
    Ok(out)
}

/// Sum of final monomials of the broken lines for `p` ending at `q`.
pub fn theta_function(d: &ScatteringDiagram, p: LatticeVec, q: &RatVec, caps: BrokenLineCaps) -> Result<Laurent> {
    theta_with_cache(d, p, q, caps, &mut BendCache::default())
}

pub fn theta_with_cache(d: &ScatteringDiagram, p: LatticeVec, q: &RatVec, caps: BrokenLineCaps, cache: &mut BendCache) -> Result<Laurent> {
    theta_checked(d, p, q, caps, cache).map(|t| t.0)
}

/// Theta function together with whether the caps cut off any broken line.
pub(crate) fn theta_checked(
    d: &ScatteringDiagram,
    p: LatticeVec,
    q: &RatVec,
    caps: BrokenLineCaps,
    cache: &mut BendCache,
) -> Result<(Laurent, bool)> {
    check_endpoint(d, q)?;
    if p.is_zero() {
        return Ok((Laurent::one(), false));
    }
    if let Some(fan) = Fan::of(d) {
        return cache.theta_forward(d, &fan, p, q, caps);
    }
    let mut acc: BTreeMap<LatticeVec, BigInt> = BTreeMap::new();
    for l in enumerate_with_cache(d, p, q, caps, cache)? {
        *acc.entry(l.final_exponent()).or_default() += l.final_coeff();
    }
    Ok((Laurent::from_terms(acc), true))
}
