use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::diagram::ScatteringDiagram;
use super::wall::{Support, Wall, WallFunction};
use crate::error::{Error, Result};
use crate::exact::{divisibility_index, primitive, Grading, LatticeVec, Vec2};

pub const DEFAULT_WALL_BOUND: usize = 64;

pub fn complete(d: &ScatteringDiagram) -> Result<ScatteringDiagram> {
    complete_with_bound(d, DEFAULT_WALL_BOUND)
}

/// Order-by-order completion at the origin by outgoing rays.
pub fn complete_with_bound(d: &ScatteringDiagram, max_walls: usize) -> Result<ScatteringDiagram> {
    if !d.singular_points.is_empty() {
        return Err(Error::Invalid("completion needs a diagram without singular points".into()));
    }
    d.ray_directions()?;
    let mut out = d.clone();
    // integral refinement of the grading so every level is an integer
    let fine = Grading { gx: d.grading.gx, gy: d.grading.gy, den: 1 };
    out.grading = fine;
    let top = d.order * d.grading.den as u32;
    let mut last_change = 0u32;
    let origin = Vec2::zero();
    for level in 1..=top {
        let t = out.graded_loop(&origin, level)?;
        let mut defect: BTreeMap<LatticeVec, [BigInt; 2]> = BTreeMap::new();
        for (j, gj) in t.g.iter().enumerate() {
            for (m, c) in gj.terms() {
                if m.is_zero() {
                    continue;
                }
                let g = fine.numerator(*m);
                if g < level as i64 {
                    return Err(Error::Invalid(format!("unresolved defect below level {level}")));
                }
                defect.entry(*m).or_insert_with(|| [BigInt::zero(), BigInt::zero()])[j] = c.clone();
            }
        }
        for (m, a) in defect {
            if !(&a[0] * m.x + &a[1] * m.y).is_zero() {
                return Err(Error::Invalid(format!("defect at ({}, {}) is not normal to its exponent", m.x, m.y)));
            }
            let b = primitive(m)?;
            let mult = divisibility_index(m)? as u32;
            let r = -b;
            let nc = Vec2::new(r.y, -r.x);
            let (num, den) = if nc.x != 0 { (a[0].clone(), nc.x) } else { (a[1].clone(), nc.y) };
            let (q, rem) = num.div_rem(&BigInt::from(den));
            if !rem.is_zero() {
                return Err(Error::Invalid("non-integral wall coefficient".into()));
            }
            let c = (-q).to_i64().ok_or_else(|| Error::Invalid("coefficient overflow".into()))?;
            let existing = out.walls.iter_mut().find(|w| {
                matches!(&w.support, Support::Ray { base, dir } if base.is_zero() && *dir == r)
            });
            match existing {
                Some(w) => w.function.multiply_factor(mult, c),
                None => {
                    let mut f = WallFunction::from_factors(b, BTreeMap::new())?;
                    f.multiply_factor(mult, c);
                    out.walls.push(Wall::new(Support::ray(Vec2::zero(), r)?, f)?);
                    if out.walls.len() > max_walls {
                        return Err(Error::CompletionUnstable);
                    }
                }
            }
            last_change = level;
        }
        out.walls.retain(|w| !w.function.is_trivial());
    }
    out.grading = d.grading;
    out.finite = last_change + 2 * d.grading.den as u32 <= top;
    let n_init = d.walls.len();
    out.walls[n_init..].sort_by(|a, b| a.support.dir().angle_cmp(&b.support.dir()));
    Ok(out)
}
