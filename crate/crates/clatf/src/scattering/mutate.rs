use super::diagram::{initial_diagram_with_order, ScatteringDiagram};
use super::seed::seed_mutate;
use super::wall::{Support, Wall, WallFunction};
use crate::error::{Error, Result};
use crate::exact::{LatticeVec, Vec2};

/// Apply T_k to every wall support and transport functions by the same linear piece.
pub fn mutate_diagram(d: &ScatteringDiagram, k: usize) -> Result<ScatteringDiagram> {
    if k > 1 {
        return Err(Error::Index(k));
    }
    if !d.singular_points.is_empty() {
        return Err(Error::Invalid("mutation needs a diagram without singular points".into()));
    }
    let t = d.seed.cluster_shear(k, d.variant)?;
    let mut rays: Vec<(LatticeVec, WallFunction)> = vec![];
    let mut walls = vec![];
    for w in &d.walls {
        let dir = w.support.dir();
        let on_line = t.n.dot(&dir) == 0;
        match &w.support {
            Support::Line { point, .. } if point.is_zero() && on_line => {
                let f = WallFunction::from_factors(-w.function.base(), w.function.factors().clone())?;
                walls.push(Wall::new(w.support.clone(), f)?);
            }
            Support::Line { point, .. } if point.is_zero() => {
                rays.push((dir, w.function.clone()));
                rays.push((-dir, w.function.clone()));
            }
            Support::Ray { base, .. } if base.is_zero() => rays.push((dir, w.function.clone())),
            _ => return Err(Error::NotConcurrent),
        }
    }
    let mut mapped: Vec<(LatticeVec, WallFunction)> = rays
        .into_iter()
        .map(|(r, f)| {
            let side = t.n.dot(&r).signum();
            let l = t.linear_piece(side);
            (l.apply(r), f.map_exponents(&l))
        })
        .collect();
    mapped.sort_by(|a, b| a.0.angle_cmp(&b.0));
    let mut used = vec![false; mapped.len()];
    for i in 0..mapped.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let (r, f) = &mapped[i];
        let partner = (0..mapped.len()).find(|&j| !used[j] && mapped[j].0 == -*r && mapped[j].1 == *f);
        let support = match partner {
            Some(j) => {
                used[j] = true;
                Support::line(Vec2::zero(), *r)?
            }
            None => Support::ray(Vec2::zero(), *r)?,
        };
        walls.push(Wall::new(support, f.clone())?);
    }
    let seed = seed_mutate(&d.seed, k)?;
    let grading = initial_diagram_with_order(&seed, d.variant, d.order)?.grading;
    Ok(ScatteringDiagram { seed, variant: d.variant, walls, singular_points: vec![], order: d.order, grading, finite: d.finite })
}
