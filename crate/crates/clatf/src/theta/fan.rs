use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::broken::BrokenLineCaps;
use crate::error::{Error, Result};
use crate::exact::{lattice_to_scalar, Laurent, LatticeVec, RatVec, Scalar, TruncatedSeries, Vec2};
use crate::scattering::{ScatteringDiagram, Support};

/// Product of wall-function powers sorted by grading numerator. `exact` is
/// false when some factor is not a polynomial and had to be truncated.
pub(crate) struct Expansion {
    pub terms: Vec<(i64, LatticeVec, BigInt)>,
    pub exact: bool,
}

/// Partial broken lines for one initial exponent: (ray just crossed, current exponent, total coefficient).
pub(crate) struct ForwardTable {
    pub states: Vec<(usize, LatticeVec, BigInt)>,
    /// Some bend was dropped by the caps.
    pub truncated: bool,
}

type WeightKey = (LatticeVec, usize, LatticeVec, usize, BrokenLineCaps);

/// Memo tables shared by theta computations over one diagram.
#[derive(Default)]
pub struct BendCache {
    expansions: HashMap<(Vec<(usize, i64)>, i64), Rc<Expansion>>,
    weights: HashMap<WeightKey, BigInt>,
    forward: HashMap<(LatticeVec, BrokenLineCaps), Rc<ForwardTable>>,
}

/// Rays from the origin and the walls along each, when every support is a
/// line through the origin or a ray based there.
pub(crate) struct Fan {
    rays: Vec<(LatticeVec, Vec<usize>)>,
}

impl Fan {
    pub(crate) fn of(d: &ScatteringDiagram) -> Option<Fan> {
        let mut rays: BTreeMap<LatticeVec, Vec<usize>> = BTreeMap::new();
        for (i, w) in d.walls.iter().enumerate() {
            match &w.support {
                Support::Line { point, dir } if point.is_zero() => {
                    rays.entry(*dir).or_default().push(i);
                    rays.entry(-*dir).or_default().push(i);
                }
                Support::Ray { base, dir } if base.is_zero() => rays.entry(*dir).or_default().push(i),
                _ => return None,
            }
        }
        Some(Fan { rays: rays.into_iter().collect() })
    }

    pub(crate) fn index_of(&self, y: &RatVec) -> Option<usize> {
        self.rays.iter().position(|(r, _)| {
            let r = r.to_rat();
            r.det(y).is_zero() && r.dot(y).is_positive()
        })
    }

    /// First ray met by x + t m, t > 0, for x at direction `a`.
    pub(crate) fn next<S: Scalar>(&self, a: &Vec2<S>, m: LatticeVec) -> Result<Option<usize>> {
        let mr: Vec2<S> = lattice_to_scalar(m);
        let s = a.det(&mr);
        if s.is_zero() {
            let along = self.rays.iter().any(|(r, _)| {
                let r: Vec2<S> = lattice_to_scalar(*r);
                r.det(a).is_zero() && r.dot(a).is_positive()
            });
            if a.dot(&mr).is_negative() || along {
                return Err(Error::NotGeneric);
            }
            return Ok(None);
        }
        Ok(self.sweep(a, &mr, s.signum()))
    }

    /// Nearest ray to `a` strictly between `a` and `m`, turning with orientation `sg`.
    fn sweep<S: Scalar>(&self, a: &Vec2<S>, mr: &Vec2<S>, sg: S) -> Option<usize> {
        let mut best: Option<(usize, Vec2<S>)> = None;
        for (j, (r, _)) in self.rays.iter().enumerate() {
            let rr: Vec2<S> = lattice_to_scalar(*r);
            if a.det(&rr).signum() != sg || rr.det(mr).signum() != sg {
                continue;
            }
            match &best {
                Some((_, b)) if b.det(&rr).signum() == sg => {}
                _ => best = Some((j, rr)),
            }
        }
        best.map(|b| b.0)
    }

    /// First ray crossed by a line arriving from infinity with exponent `p`,
    /// passing the origin on side `sg` (+1 counterclockwise of p).
    fn first_from_infinity(&self, p: LatticeVec, sg: i64) -> Option<usize> {
        self.sweep(&p, &(-p), sg)
    }

    /// Bends any line within the degree cap can have.
    pub(crate) fn max_bends(&self, d: &ScatteringDiagram, caps: BrokenLineCaps) -> usize {
        let least = d.walls.iter().map(|w| d.grading.numerator(w.function.base())).filter(|g| *g > 0).min().unwrap_or(1);
        (caps.degree as i64 * d.grading.den / least) as usize
    }

    pub(crate) fn walls_on(&self, k: usize) -> &[usize] {
        &self.rays[k].1
    }

    /// Rays in decreasing number of steps before a line with exponent m leaves the fan.
    fn sweep_order(&self, m: LatticeVec) -> Vec<usize> {
        let n = self.rays.len();
        let next: Vec<Option<usize>> = (0..n).map(|k| self.next(&self.rays[k].0, -m).unwrap_or(None)).collect();
        let mut len = vec![None; n];
        fn depth(k: usize, next: &[Option<usize>], len: &mut [Option<usize>]) -> usize {
            if let Some(l) = len[k] {
                return l;
            }
            let l = match next[k] {
                None => 0,
                Some(j) => 1 + depth(j, next, len),
            };
            len[k] = Some(l);
            l
        }
        let mut order: Vec<usize> = (0..n).collect();
        for k in 0..n {
            depth(k, &next, &mut len);
        }
        order.sort_by_key(|&k| std::cmp::Reverse(len[k]));
        order
    }
}

impl BendCache {
    /// Expansion of the product of f_w^{|<n_w, m>|} over the walls `ws`.
    pub(crate) fn expansion(&mut self, d: &ScatteringDiagram, ws: &[usize], m: LatticeVec, cap: i64) -> Result<Rc<Expansion>> {
        let powers: Vec<(usize, i64)> = ws.iter().map(|&i| (i, d.walls[i].normal.dot(&m).abs())).collect();
        let polys: Option<Vec<Laurent>> = ws.iter().map(|&i| d.walls[i].function.polynomial()).collect();
        let key = (powers.clone(), if polys.is_some() { -1 } else { cap });
        if let Some(e) = self.expansions.get(&key) {
            return Ok(e.clone());
        }
        let g = d.grading;
        let (terms, exact): (Vec<(LatticeVec, BigInt)>, bool) = match polys {
            Some(polys) => {
                let mut acc = Laurent::one();
                for (poly, (_, e)) in polys.iter().zip(&powers) {
                    acc = acc.mul(&poly.pow(*e as u32));
                }
                (acc.terms().iter().map(|(m, c)| (*m, c.clone())).collect(), true)
            }
            None => {
                let order = ((cap.max(0) + g.den - 1) / g.den) as u32;
                let mut s = TruncatedSeries::one(g, order);
                for &(i, e) in &powers {
                    s = s.mul(&d.walls[i].function.series_pow(e, g, order)?)?;
                }
                (s.terms().iter().map(|(m, c)| (*m, c.clone())).collect(), false)
            }
        };
        let mut terms: Vec<(i64, LatticeVec, BigInt)> = terms.into_iter().map(|(e, c)| (g.numerator(e), e, c)).collect();
        terms.sort();
        if terms.iter().any(|t| !t.2.is_positive()) {
            return Err(Error::Invalid("negative bend coefficient".into()));
        }
        let e = Rc::new(Expansion { terms, exact });
        self.expansions.insert(key, e.clone());
        Ok(e)
    }

    /// Total coefficient of backward completions with exponent `m` whose next
    /// crossing is at ray `next`.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn weight_from(
        &mut self,
        d: &ScatteringDiagram,
        fan: &Fan,
        p: LatticeVec,
        caps: BrokenLineCaps,
        next: Option<usize>,
        m: LatticeVec,
        bends: usize,
    ) -> Result<BigInt> {
        let budget = d.grading.numerator(m) - d.grading.numerator(p);
        if budget < 0 {
            return Ok(BigInt::zero());
        }
        let Some(k) = next else {
            return Ok(if m == p { BigInt::one() } else { BigInt::zero() });
        };
        let cap = caps.degree as i64 * d.grading.den;
        let exp = self.expansion(d, fan.walls_on(k), m, cap)?;
        let mut total = BigInt::zero();
        for (_, e, c) in exp.terms.iter().take_while(|t| t.0 <= budget) {
            if e.is_zero() {
                total += self.weight(d, fan, p, caps, k, m, bends)?;
            } else if bends < caps.bends {
                total += c * self.weight(d, fan, p, caps, k, m - *e, bends + 1)?;
            }
        }
        Ok(total)
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn weight(
        &mut self,
        d: &ScatteringDiagram,
        fan: &Fan,
        p: LatticeVec,
        caps: BrokenLineCaps,
        k: usize,
        m: LatticeVec,
        bends: usize,
    ) -> Result<BigInt> {
        if d.grading.numerator(m) < d.grading.numerator(p) {
            return Ok(BigInt::zero());
        }
        let free = caps.bends >= fan.max_bends(d, caps);
        let key = (p, k, m, if free { 0 } else { bends }, caps);
        if let Some(w) = self.weights.get(&key) {
            return Ok(w.clone());
        }
        let next = fan.next(&fan.rays[k].0, m)?;
        let w = self.weight_from(d, fan, p, caps, next, m, bends)?;
        self.weights.insert(key, w.clone());
        Ok(w)
    }

    /// All partial broken lines with initial exponent `p` within the caps, by forward propagation.
    pub(crate) fn forward(&mut self, d: &ScatteringDiagram, fan: &Fan, p: LatticeVec, caps: BrokenLineCaps) -> Result<Rc<ForwardTable>> {
        if let Some(t) = self.forward.get(&(p, caps)) {
            return Ok(t.clone());
        }
        let cap = caps.degree as i64 * d.grading.den;
        let base = d.grading.numerator(p);
        let free = caps.bends >= fan.max_bends(d, caps);
        type Group = BTreeMap<(usize, usize), BigInt>;
        let mut groups: BTreeMap<(i64, LatticeVec), Group> = BTreeMap::new();
        let mut truncated = false;
        let mut states = vec![];

        // Crossing ray k with exponent m; returns the unbent share, files the bent ones.
        let cross = |this: &mut BendCache,
                         groups: &mut BTreeMap<(i64, LatticeVec), Group>,
                         truncated: &mut bool,
                         k: usize,
                         m: LatticeVec,
                         bends: usize,
                         w: &BigInt|
         -> Result<BigInt> {
            let exp = this.expansion(d, fan.walls_on(k), m, cap)?;
            let room = cap - (d.grading.numerator(m) - base);
            if !exp.exact || exp.terms.last().is_some_and(|t| t.0 > room) {
                *truncated = true;
            }
            let mut stay = BigInt::zero();
            for (n, e, c) in exp.terms.iter().take_while(|t| t.0 <= room) {
                if e.is_zero() {
                    stay += w * c;
                    continue;
                }
                let b = bends + 1;
                if !free && b > caps.bends {
                    *truncated = true;
                    continue;
                }
                let m2 = m + *e;
                if m2.det(&fan.rays[k].0) == 0 {
                    // runs along the wall it bent at, or has stopped
                    continue;
                }
                let slot = groups.entry((d.grading.numerator(m) + n, m2)).or_default();
                *slot.entry((k, if free { 0 } else { b })).or_default() += w * c;
            }
            Ok(stay)
        };

        let mut start: Group = BTreeMap::new();
        for sg in [1, -1] {
            if let Some(k0) = fan.first_from_infinity(p, sg) {
                let stay = cross(self, &mut groups, &mut truncated, k0, p, 0, &BigInt::one())?;
                if !stay.is_zero() {
                    *start.entry((k0, 0)).or_default() += stay;
                }
            }
        }
        if !start.is_empty() {
            let slot = groups.entry((base, p)).or_default();
            for (k, w) in start {
                *slot.entry(k).or_default() += w;
            }
        }

        while let Some(((_, m), mut group)) = groups.pop_first() {
            for k in fan.sweep_order(m) {
                let here: Vec<((usize, usize), BigInt)> =
                    group.range((k, 0)..=(k, usize::MAX)).map(|(a, b)| (*a, b.clone())).collect();
                for ((_, b), w) in here {
                    if w.is_zero() {
                        continue;
                    }
                    states.push((k, m, w.clone()));
                    if let Some(k2) = fan.next(&fan.rays[k].0, -m)? {
                        let stay = cross(self, &mut groups, &mut truncated, k2, m, b, &w)?;
                        if !stay.is_zero() {
                            *group.entry((k2, b)).or_default() += stay;
                        }
                    }
                }
            }
        }
        let t = Rc::new(ForwardTable { states, truncated });
        self.forward.insert((p, caps), t.clone());
        Ok(t)
    }

    /// Theta function at `q` from the forward table; the flag reports truncation.
    pub(crate) fn theta_forward(
        &mut self,
        d: &ScatteringDiagram,
        fan: &Fan,
        p: LatticeVec,
        q: &RatVec,
        caps: BrokenLineCaps,
    ) -> Result<(Laurent, bool)> {
        let table = self.forward(d, fan, p, caps)?;
        let mut acc = Laurent::zero();
        if fan.next(q, p)?.is_none() {
            acc.add_term(p, BigInt::one());
        }
        let mut first: HashMap<LatticeVec, Option<usize>> = HashMap::new();
        for (k, m, w) in &table.states {
            let hit = match first.get(m) {
                Some(h) => *h,
                None => {
                    let h = fan.next(q, *m)?;
                    first.insert(*m, h);
                    h
                }
            };
            if hit == Some(*k) {
                acc.add_term(*m, w.clone());
            }
        }
        Ok((acc, table.truncated))
    }
}
