use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::auto::{apply_crossing, ExactAutomorphism, RingAutomorphism};
use super::seed::{Seed, Variant};
use super::wall::{SingularPoint, Support, Wall, WallFunction};
use crate::error::{Error, Result};
use crate::exact::{FiniteType, Grading, LatticeVec, Rat, RatVec, TruncatedSeries, Vec2};

pub const DEFAULT_ORDER: u32 = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScatteringDiagram {
    pub seed: Seed,
    pub variant: Variant,
    pub walls: Vec<Wall>,
    pub singular_points: Vec<SingularPoint>,
    pub order: u32,
    pub grading: Grading,
    /// Set by completion once the wall set has stabilized.
    pub finite: bool,
}

/// The two initial incoming walls of a seed.
pub fn initial_diagram(seed: &Seed, variant: Variant) -> Result<ScatteringDiagram> {
    initial_diagram_with_order(seed, variant, DEFAULT_ORDER)
}

pub fn initial_diagram_with_order(seed: &Seed, variant: Variant, order: u32) -> Result<ScatteringDiagram> {
    if seed.label() == FiniteType::A1xA1 {
        return Err(Error::InfiniteType);
    }
    let mut walls = vec![];
    let mut exps = vec![];
    for i in 0..2 {
        let v = seed.v(i, variant)?;
        let function = match variant {
            // (1 + z^{prim(d_i v_i)})^{ind(d_i v_i)}
            Variant::X => WallFunction::binomial_power(v * seed.d(i), 1)?,
            Variant::A => WallFunction::binomial_power(v, 1)?,
        };
        exps.push(if variant == Variant::X { v * seed.d(i) } else { v });
        let n = seed.normal(i, variant);
        let support = Support::line(Vec2::zero(), Vec2::new(-n.y, n.x))?;
        walls.push(Wall::new(support, function)?);
    }
    let grading = Grading::from_basis(exps[0], exps[1])?;
    Ok(ScatteringDiagram {
        seed: seed.clone(),
        variant,
        walls,
        singular_points: vec![],
        order,
        grading,
        finite: false,
    })
}

/// One piece of the local picture at a junction.
#[derive(Clone, Debug)]
pub(crate) enum ArmKind {
    Wall(usize),
    Cut(usize),
}

#[derive(Clone, Debug)]
pub(crate) struct Arm {
    pub dir: LatticeVec,
    pub kind: ArmKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Defect {
    pub point: RatVec,
    /// Lowest failing grading (graded engine only).
    pub grading: Option<Rat>,
    pub terms: Vec<(LatticeVec, BigInt)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub consistent: bool,
    pub junctions: usize,
    pub defects: Vec<Defect>,
}

/// Either engine's loop product.
#[derive(Clone, Debug)]
pub enum LoopProduct {
    Graded(RingAutomorphism),
    Exact(ExactAutomorphism),
}

impl LoopProduct {
    pub fn is_identity(&self) -> bool {
        match self {
            LoopProduct::Graded(a) => a.is_identity(),
            LoopProduct::Exact(a) => a.is_identity(),
        }
    }
}

impl ScatteringDiagram {
    pub fn empty(seed: Seed, variant: Variant, grading: Grading, order: u32) -> Self {
        ScatteringDiagram { seed, variant, walls: vec![], singular_points: vec![], order, grading, finite: false }
    }

    pub fn with_order(&self, order: u32) -> Self {
        ScatteringDiagram { order, ..self.clone() }
    }

    /// Cut rays must not meet wall supports except at their own base.
    pub fn check_cuts(&self) -> Result<()> {
        for (i, sp) in self.singular_points.iter().enumerate() {
            let cut = sp.cut_support();
            for w in &self.walls {
                if w.support.dir().det(&sp.cut).is_zero() {
                    if collinear_overlap(&cut, &w.support) {
                        return Err(Error::CutCrossesWall(format!("({}, {})", sp.position.x, sp.position.y)));
                    }
                    continue;
                }
                if let Some(p) = cut.intersect(&w.support) {
                    if p != sp.position {
                        return Err(Error::CutCrossesWall(format!("({}, {})", p.x, p.y)));
                    }
                }
            }
            for (j, other) in self.singular_points.iter().enumerate() {
                if i != j {
                    if let Some(p) = cut.intersect(&other.cut_support()) {
                        if p != sp.position || p != other.position {
                            return Err(Error::CutCrossesWall(format!("({}, {})", p.x, p.y)));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Points where a nontrivial loop may be needed.
    pub fn junctions(&self) -> Vec<RatVec> {
        let mut pts: Vec<RatVec> = vec![];
        for sp in &self.singular_points {
            pts.push(sp.position.clone());
        }
        for (i, w) in self.walls.iter().enumerate() {
            pts.extend(w.support.endpoints());
            for w2 in &self.walls[i + 1..] {
                if let Some(p) = w.support.intersect(&w2.support) {
                    pts.push(p);
                }
            }
        }
        pts.sort();
        pts.dedup();
        pts
    }

    pub(crate) fn arms_at(&self, p: &RatVec) -> Result<Vec<Arm>> {
        let mut arms = vec![];
        for (i, w) in self.walls.iter().enumerate() {
            for d in w.support.arms_at(p) {
                arms.push(Arm { dir: d, kind: ArmKind::Wall(i) });
            }
        }
        for (i, sp) in self.singular_points.iter().enumerate() {
            if sp.position == *p {
                if arms.iter().any(|a| a.dir == sp.cut) {
                    return Err(Error::CutCrossesWall(format!("({}, {})", p.x, p.y)));
                }
                arms.push(Arm { dir: sp.cut, kind: ArmKind::Cut(i) });
            } else if sp.cut_support().contains(p) {
                return Err(Error::LoopThroughSingularity);
            }
        }
        arms.sort_by(|a, b| a.dir.angle_cmp(&b.dir).then(Ordering::Equal));
        Ok(arms)
    }

    /// Counterclockwise loop product around `center`, exact engine.
    pub fn exact_loop(&self, center: &RatVec) -> Result<ExactAutomorphism> {
        let mut theta = ExactAutomorphism::identity();
        for arm in self.arms_at(center)? {
            let step = match arm.kind {
                ArmKind::Wall(i) => {
                    let w = &self.walls[i];
                    ExactAutomorphism::crossing(&w.function, w.normal, w.crossing_sign(arm.dir))
                }
                ArmKind::Cut(i) => ExactAutomorphism::monomial_map(self.singular_points[i].linear()),
            };
            theta = step.compose(&theta);
        }
        Ok(theta)
    }

    /// Counterclockwise loop product around `center`, graded engine truncated at `order`.
    pub fn graded_loop(&self, center: &RatVec, order: u32) -> Result<RingAutomorphism> {
        let arms = self.arms_at(center)?;
        if arms.iter().any(|a| matches!(a.kind, ArmKind::Cut(_))) {
            return Err(Error::Invalid("graded engine cannot cross a cut".into()));
        }
        let mut g = [TruncatedSeries::one(self.grading, order), TruncatedSeries::one(self.grading, order)];
        for arm in arms {
            let ArmKind::Wall(i) = arm.kind else { unreachable!() };
            let w = &self.walls[i];
            let s = w.crossing_sign(arm.dir);
            let mut cache = HashMap::new();
            for (j, gj) in g.iter_mut().enumerate() {
                let nj = if j == 0 { w.normal.x } else { w.normal.y };
                let mono = w.function.series_pow(s * nj, self.grading, order)?;
                *gj = apply_crossing(gj, &w.function, w.normal, s, &mut cache)?.mul(&mono)?;
            }
        }
        Ok(RingAutomorphism { g })
    }

    pub fn path_ordered_product(&self, center: &RatVec) -> Result<LoopProduct> {
        if self.singular_points.is_empty() {
            Ok(LoopProduct::Graded(self.graded_loop(center, self.order)?))
        } else {
            Ok(LoopProduct::Exact(self.exact_loop(center)?))
        }
    }

    pub fn is_consistent(&self) -> Result<ConsistencyReport> {
        self.check_cuts()?;
        let pts = self.junctions();
        let mut defects = vec![];
        for p in &pts {
            if self.singular_points.is_empty() {
                let t = self.graded_loop(p, self.order)?;
                let mut best: Option<(Rat, Vec<(LatticeVec, BigInt)>)> = None;
                for gj in &t.g {
                    if let Some((lo, terms)) = gj.lowest_defect() {
                        match &mut best {
                            Some((b, bt)) if *b == lo => bt.extend(terms),
                            Some((b, _)) if *b < lo => {}
                            _ => best = Some((lo, terms)),
                        }
                    }
                }
                if let Some((lo, mut terms)) = best {
                    terms.sort();
                    terms.dedup_by(|a, b| a.0 == b.0);
                    defects.push(Defect { point: p.clone(), grading: Some(lo), terms });
                }
            } else {
                let t = self.exact_loop(p)?;
                if !t.is_identity() {
                    let mut terms = vec![];
                    for j in 0..2 {
                        terms.extend(t.generator_ratio(j).defect().terms().iter().map(|(m, c)| (*m, c.clone())));
                    }
                    terms.sort();
                    defects.push(Defect { point: p.clone(), grading: None, terms });
                }
            }
        }
        defects.sort_by(|a, b| a.grading.cmp(&b.grading).then_with(|| a.point.cmp(&b.point)));
        Ok(ConsistencyReport { consistent: defects.is_empty(), junctions: pts.len(), defects })
    }

    /// Rays from the origin carried by the walls (lines give two).
    pub fn ray_directions(&self) -> Result<Vec<LatticeVec>> {
        let mut dirs = vec![];
        for w in &self.walls {
            let arms = w.support.arms_at(&Vec2::zero());
            let through = match &w.support {
                Support::Line { .. } => arms.len() == 2,
                Support::Ray { base, .. } => base.is_zero(),
                Support::Segment { .. } => false,
            };
            if !through {
                return Err(Error::NotConcurrent);
            }
            dirs.extend(arms);
        }
        dirs.sort_by(|a, b| a.angle_cmp(b));
        dirs.dedup_by(|a, b| a.angle_cmp(b) == Ordering::Equal);
        Ok(dirs)
    }
}

/// Whether a ray and a parallel support share a piece of positive length.
fn collinear_overlap(ray: &Support, other: &Support) -> bool {
    let Some(t0) = ray.param_of(other.anchor()) else { return false };
    let same = other.dir() == ray.dir();
    match other {
        Support::Line { .. } => true,
        Support::Ray { .. } => same || t0 > Rat::zero(),
        Support::Segment { end, .. } => {
            let t1 = ray.param_of(end).expect("collinear");
            t0 > Rat::zero() || t1 > Rat::zero()
        }
    }
}

/// Maximal cones between adjacent rays, counterclockwise from the ray of least angle.
pub fn chambers(d: &ScatteringDiagram) -> Result<Vec<(LatticeVec, LatticeVec)>> {
    let dirs = d.ray_directions()?;
    let n = dirs.len();
    Ok((0..n).map(|i| (dirs[i], dirs[(i + 1) % n])).collect())
}

pub fn is_consistent(d: &ScatteringDiagram) -> Result<ConsistencyReport> {
    d.is_consistent()
}

pub fn path_ordered_product(d: &ScatteringDiagram, center: &RatVec) -> Result<LoopProduct> {
    d.path_ordered_product(center)
}
