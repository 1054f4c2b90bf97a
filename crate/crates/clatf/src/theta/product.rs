use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;

use super::broken::{theta_checked, BrokenLineCaps};
use super::fan::BendCache;
use crate::error::{Error, Result};
use crate::exact::{dilation_points, ratio, Laurent, LatticeVec, Polygon, RatVec, Vec2};
use crate::scattering::{chambers, ScatteringDiagram};

/// r -> alpha(p, q, r), nonzero entries only.
pub type ProductRow = BTreeMap<LatticeVec, BigInt>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureConstantTable {
    pub degree_cap: u32,
    pub entries: BTreeMap<(LatticeVec, LatticeVec, LatticeVec), BigInt>,
}

impl StructureConstantTable {
    pub fn new(degree_cap: u32) -> Self {
        StructureConstantTable { degree_cap, entries: BTreeMap::new() }
    }

    pub fn insert_row(&mut self, p: LatticeVec, q: LatticeVec, row: &ProductRow) {
        for (r, c) in row {
            self.entries.insert((p, q, *r), c.clone());
        }
    }

    pub fn get(&self, p: LatticeVec, q: LatticeVec, r: LatticeVec) -> BigInt {
        self.entries.get(&(p, q, r)).cloned().unwrap_or_default()
    }

    pub fn row(&self, p: LatticeVec, q: LatticeVec) -> ProductRow {
        self.entries.iter().filter(|((a, b, _), _)| *a == p && *b == q).map(|((_, _, r), c)| (*r, c.clone())).collect()
    }
}

const PRIMES: [(i64, i64); 4] = [(1009, 1013), (10007, 10009), (100003, 100019), (1000003, 1000033)];

/// Candidate endpoint inside the open cone spanned by `a` then `b` (counterclockwise).
pub fn chamber_endpoint(a: LatticeVec, b: LatticeVec, attempt: usize) -> Option<RatVec> {
    let (p1, p2) = *PRIMES.get(attempt)?;
    let c = if a.det(&b) > 0 { a + b } else { Vec2::new(-a.y, a.x) };
    let q = Vec2::new(ratio(c.x * p1 + 1, p1), ratio(c.y * p2 + 1, p2));
    let inside = |u: LatticeVec, v: &RatVec| u.to_rat().det(v) > Zero::zero();
    (inside(a, &q) && !inside(b, &q)).then_some(q).filter(|q| !b.to_rat().det(q).is_zero())
}

/// Doublings of the degree cap tried before giving up.
const MAX_DOUBLINGS: u32 = 4;

/// Broken-line theta functions and products over a conical diagram,
/// with one endpoint per chamber. Unless built with `fixed`, the caps are
/// raised until no broken line is cut off.
pub struct ThetaEngine<'a> {
    d: &'a ScatteringDiagram,
    caps: BrokenLineCaps,
    adaptive: bool,
    chambers: Vec<(LatticeVec, LatticeVec)>,
    attempts: Vec<usize>,
    cache: HashMap<(LatticeVec, usize), Laurent>,
    bends: BendCache,
}

impl<'a> ThetaEngine<'a> {
    pub fn new(d: &'a ScatteringDiagram, caps: BrokenLineCaps) -> Result<Self> {
        let chambers = chambers(d)?;
        let n = chambers.len();
        Ok(ThetaEngine { d, caps, adaptive: true, chambers, attempts: vec![0; n], cache: HashMap::new(), bends: BendCache::default() })
    }

    /// Engine that truncates at exactly `caps`.
    pub fn fixed(d: &'a ScatteringDiagram, caps: BrokenLineCaps) -> Result<Self> {
        Ok(ThetaEngine { adaptive: false, ..Self::new(d, caps)? })
    }

    pub fn chambers(&self) -> &[(LatticeVec, LatticeVec)] {
        &self.chambers
    }

    pub fn endpoint(&self, c: usize) -> Result<RatVec> {
        let (a, b) = self.chambers[c];
        chamber_endpoint(a, b, self.attempts[c]).ok_or(Error::NotGeneric)
    }

    /// Chamber whose closure holds `r`; a ray is assigned to the chamber
    /// counterclockwise of it, and the origin to that of (1, 0).
    pub fn chamber_of(&self, r: LatticeVec) -> usize {
        let r = if r.is_zero() { Vec2::new(1, 0) } else { r };
        let n = self.chambers.len();
        (0..n).rev().find(|&i| self.chambers[i].0.angle_cmp(&r) != Ordering::Greater).unwrap_or(n - 1)
    }

    pub fn theta(&mut self, p: LatticeVec, c: usize) -> Result<Laurent> {
        if let Some(t) = self.cache.get(&(p, c)) {
            return Ok(t.clone());
        }
        loop {
            let q = self.endpoint(c)?;
            match self.converged(p, &q) {
                Ok(t) => {
                    self.cache.insert((p, c), t.clone());
                    return Ok(t);
                }
                Err(Error::NotGeneric) => {
                    self.attempts[c] += 1;
                    self.cache.retain(|k, _| k.1 != c);
                }
                Err(e) => return Err(e),
            }
        }
    }

    fn converged(&mut self, p: LatticeVec, q: &RatVec) -> Result<Laurent> {
        let mut caps = self.caps;
        for _ in 0..=MAX_DOUBLINGS {
            let (t, cut) = theta_checked(self.d, p, q, caps, &mut self.bends)?;
            if !cut || !self.adaptive {
                return Ok(t);
            }
            caps = BrokenLineCaps { degree: caps.degree * 2, bends: caps.bends * 2 };
        }
        Err(Error::NonConvergent)
    }

    pub fn product(&mut self, p: LatticeVec, q: LatticeVec) -> Result<ProductRow> {
        let mut row = ProductRow::new();
        for c in 0..self.chambers.len() {
            let prod = self.theta(p, c)?.mul(&self.theta(q, c)?);
            for (r, a) in prod.terms() {
                if self.chamber_of(*r) == c {
                    row.insert(*r, a.clone());
                }
            }
        }
        Ok(row)
    }
}

pub fn theta_product(d: &ScatteringDiagram, p: LatticeVec, q: LatticeVec) -> Result<ProductRow> {
    ThetaEngine::new(d, BrokenLineCaps::default())?.product(p, q)
}

/// Lattice points of one dilation of a base polygon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeDilation {
    pub base: Polygon,
    pub d: u32,
    pub points: Vec<LatticeVec>,
}

impl ConeDilation {
    pub fn new(base: &Polygon, d: u32) -> Self {
        ConeDilation { base: base.clone(), d, points: dilation_points(base, d) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositivityReport {
    pub positive: bool,
    /// (p1, p2, r) with alpha(p1, p2, r) != 0 but r outside the summed dilation.
    pub witness: Option<(LatticeVec, LatticeVec, LatticeVec)>,
    pub dmax: u32,
    pub pairs_checked: usize,
}

pub fn is_positive(s: &Polygon, d: &ScatteringDiagram, dmax: u32) -> Result<PositivityReport> {
    is_positive_with_caps(s, d, dmax, BrokenLineCaps::default())
}

pub fn is_positive_with_caps(s: &Polygon, d: &ScatteringDiagram, dmax: u32, caps: BrokenLineCaps) -> Result<PositivityReport> {
    let mut engine = ThetaEngine::new(d, caps)?;
    let layers: Vec<ConeDilation> = (0..=dmax).map(|k| ConeDilation::new(s, k)).collect();
    let mut pairs = 0;
    for d1 in 1..=dmax {
        for d2 in d1..=dmax {
            let target = s.scale(&crate::exact::rat((d1 + d2) as i64));
            for p1 in &layers[d1 as usize].points {
                for p2 in &layers[d2 as usize].points {
                    if d1 == d2 && p2 < p1 {
                        continue;
                    }
                    pairs += 1;
                    for r in engine.product(*p1, *p2)?.keys() {
                        if !target.contains(&r.to_rat()) {
                            return Ok(PositivityReport { positive: false, witness: Some((*p1, *p2, *r)), dmax, pairs_checked: pairs });
                        }
                    }
                }
            }
        }
    }
    Ok(PositivityReport { positive: true, witness: None, dmax, pairs_checked: pairs })
}
