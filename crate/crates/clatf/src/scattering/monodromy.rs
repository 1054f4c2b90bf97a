use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use super::diagram::ScatteringDiagram;
use super::seed::{Seed, Variant};
use super::wall::{SingularPoint, Support, Wall, WallFunction};
use crate::error::{Error, Result};
use crate::exact::{rat, FiniteType, Grading, LatticeVec, Mat2, Rat, RatVec, UnimodularAffineMap, Vec2};

/// New position along the invariant line, measured from the anchor junction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WormParam {
    At(Rat),
    Infinity,
}

fn on_line(p: &RatVec, u: LatticeVec, x: &RatVec) -> Option<Rat> {
    let ur = u.to_rat();
    let w = x.clone() - p.clone();
    w.det(&ur).is_zero().then(|| ur.dot(&w) / ur.dot(&ur))
}

fn own_wall(w: &Wall, sp: &SingularPoint) -> bool {
    let u = sp.invariant_direction;
    match &w.support {
        Support::Ray { base, dir } | Support::Segment { start: base, dir, .. } => *base == sp.position && (*dir == u || *dir == -u),
        Support::Line { .. } => false,
    }
}

/// Open-interval test: does the support meet the interior of
/// {p + s w + l c : 0 < s < s_max (or s > 0 when None), l > 0}?
fn meets_open_strip(sup: &Support, p: &RatVec, w: &RatVec, c: &RatVec, s_max: Option<&Rat>) -> bool {
    let den = w.det(c);
    let a = sup.anchor().clone() - p.clone();
    let d = sup.dir().to_rat();
    // s(tau) = det(x, c)/den, l(tau) = det(w, x)/den, x = a + tau d
    let s0 = a.det(c) / den.clone();
    let s1 = d.det(c) / den.clone();
    let l0 = w.det(&a) / den.clone();
    let l1 = w.det(&d) / den;
    let mut lo: Option<Rat> = None;
    let mut hi: Option<Rat> = None;
    let mut ok = true;
    let mut constrain = |c0: Rat, c1: Rat, lower: bool, bound: Rat| {
        // lower: c0 + c1 tau > bound ; else c0 + c1 tau < bound
        let (c0, c1, bound) = if lower { (c0, c1, bound) } else { (-c0, -c1, -bound) };
        if c1.is_zero() {
            if c0 <= bound {
                ok = false;
            }
        } else {
            let t = (bound - c0) / c1.clone();
            if c1.is_positive() {
                if lo.as_ref().is_none_or(|l| t > *l) {
                    lo = Some(t);
                }
            } else if hi.as_ref().is_none_or(|h| t < *h) {
                hi = Some(t);
            }
        }
    };
    constrain(s0.clone(), s1.clone(), true, Rat::zero());
    if let Some(m) = s_max {
        constrain(s0, s1, false, m.clone());
    }
    constrain(l0, l1, true, Rat::zero());
    match sup {
        Support::Line { .. } => {}
        Support::Ray { .. } => constrain(Rat::zero(), rat(1), true, Rat::zero()),
        Support::Segment { start, end, .. } => {
            let len = sup.param_of(end).expect("segment end") - sup.param_of(start).expect("segment start");
            constrain(Rat::zero(), rat(1), true, Rat::zero());
            constrain(Rat::zero(), rat(1), false, len);
        }
    }
    ok && match (lo, hi) {
        (Some(l), Some(h)) => l < h,
        _ => true,
    }
}

/// Slide a singular point along its invariant line.
pub fn move_worm(d: &ScatteringDiagram, sp_index: usize, t: WormParam) -> Result<ScatteringDiagram> {
    let sp = d.singular_points.get(sp_index).ok_or(Error::Index(sp_index))?.clone();
    let u = sp.invariant_direction;
    let p = sp.position.clone();
    let own: Vec<usize> = (0..d.walls.len()).filter(|&i| own_wall(&d.walls[i], &sp)).collect();
    if own.is_empty() {
        return Err(Error::NotParallel);
    }
    let others: Vec<&Wall> = d.walls.iter().enumerate().filter(|(i, _)| !own.contains(i)).map(|(_, w)| w).collect();
    // junctions of the rest of the diagram on the invariant line
    let mut marks: Vec<Rat> = vec![];
    let line = Support::Line { point: p.clone(), dir: u };
    for w in &others {
        if w.support.dir().det(&u).is_zero() {
            if on_line(&p, u, w.support.anchor()).is_some() {
                marks.extend(w.support.endpoints().iter().filter_map(|e| on_line(&p, u, e)));
            }
        } else if let Some(x) = w.support.intersect(&line) {
            marks.push(on_line(&p, u, &x).expect("on line"));
        }
    }
    for (j, other) in d.singular_points.iter().enumerate() {
        if j != sp_index {
            if let Some(s) = on_line(&p, u, &other.position) {
                marks.push(s);
            }
        }
    }
    let anchor_s = marks.iter().filter(|s| !s.is_positive()).max().cloned().unwrap_or_else(Rat::zero);
    let anchor = p.clone() + u.to_rat() * anchor_s.clone();
    let c = sp.cut.to_rat();
    let mut out = d.clone();
    match t {
        WormParam::At(t) => {
            if t.is_negative() {
                return Err(Error::MoveBlocked("negative parameter".into()));
            }
            let q = anchor + u.to_rat() * t.clone();
            if q == p {
                return Ok(d.clone());
            }
            let w = q.clone() - p.clone();
            let path_blocked = marks.iter().any(|s| {
                let x = p.clone() + u.to_rat() * s.clone();
                let along = on_line(&p, u, &q).expect("q on line");
                let (a, b) = if along.is_positive() { (Rat::zero(), along) } else { (along, Rat::zero()) };
                *s > a && *s < b && x != q
            });
            let strip_blocked = others.iter().any(|o| meets_open_strip(&o.support, &p, &w, &c, Some(&rat(1))))
                || other_cuts(d, sp_index).iter().any(|o| meets_open_strip(o, &p, &w, &c, Some(&rat(1))));
            let sp_blocked = d.singular_points.iter().enumerate().any(|(j, o)| {
                j != sp_index && o.position != p && o.position != q && point_in_strip(&o.position, &p, &w, &c)
            });
            if path_blocked || strip_blocked || sp_blocked {
                return Err(Error::MoveBlocked("the sweep meets another wall or junction".into()));
            }
            let mut drop = vec![];
            for &i in &own {
                let wall = &mut out.walls[i];
                match &wall.support {
                    Support::Ray { dir, .. } => wall.support = Support::Ray { base: q.clone(), dir: *dir },
                    Support::Segment { end, dir, .. } => {
                        let len = wall.support.param_of(end).expect("end");
                        let sq = wall.support.param_of(&q).expect("q");
                        if sq > len {
                            return Err(Error::MoveBlocked("moved past the end of a wall piece".into()));
                        }
                        if sq == len {
                            drop.push(i);
                        } else {
                            wall.support = Support::Segment { start: q.clone(), end: end.clone(), dir: *dir };
                        }
                    }
                    Support::Line { .. } => unreachable!(),
                }
            }
            for i in drop.into_iter().rev() {
                out.walls.remove(i);
            }
            let moved = SingularPoint::new(q, sp.linear(), sp.cut)?;
            out.singular_points[sp_index] = moved;
        }
        WormParam::Infinity => {
            let wedge_blocked = others.iter().any(|o| meets_open_strip(&o.support, &p, &u.to_rat(), &c, None))
                || other_cuts(d, sp_index).iter().any(|o| meets_open_strip(o, &p, &u.to_rat(), &c, None));
            let on_path = marks.iter().any(|s| s.is_positive());
            if wedge_blocked || on_path {
                return Err(Error::MoveBlocked("the sweep to infinity meets another wall".into()));
            }
            let mut keep = vec![];
            for (i, wall) in out.walls.iter().enumerate() {
                if !own.contains(&i) {
                    keep.push(wall.clone());
                    continue;
                }
                let dir = wall.support.dir();
                if dir == u {
                    continue;
                }
                let support = match &wall.support {
                    Support::Ray { base, .. } => Support::Line { point: base.clone(), dir: u },
                    Support::Segment { end, .. } => Support::Ray { base: end.clone(), dir: u },
                    Support::Line { .. } => unreachable!(),
                };
                keep.push(Wall::new(support, wall.function.clone())?);
            }
            out.walls = keep;
            out.singular_points.remove(sp_index);
        }
    }
    Ok(out)
}

fn other_cuts(d: &ScatteringDiagram, sp_index: usize) -> Vec<Support> {
    d.singular_points.iter().enumerate().filter(|(j, _)| *j != sp_index).map(|(_, o)| o.cut_support()).collect()
}

fn point_in_strip(x: &RatVec, p: &RatVec, w: &RatVec, c: &RatVec) -> bool {
    let den = w.det(c);
    let a = x.clone() - p.clone();
    let s = a.det(c) / den.clone();
    let l = w.det(&a) / den;
    !s.is_negative() && s <= rat(1) && !l.is_negative()
}

/// Whether r lies strictly inside the counterclockwise sector from a to b.
fn strictly_inside(a: LatticeVec, r: LatticeVec, b: LatticeVec) -> bool {
    let rel = |v: LatticeVec| Vec2::new(a.dot(&v), a.det(&v));
    let rr = rel(r);
    let rb = rel(b);
    let zero = Vec2::new(1, 0);
    rr.angle_cmp(&zero) == Ordering::Greater && rr.angle_cmp(&rb) == Ordering::Less
}

/// Swing the branch cut of a singular point to a new direction.
pub fn recut(d: &ScatteringDiagram, sp_index: usize, new_cut: LatticeVec, clockwise: bool) -> Result<ScatteringDiagram> {
    let sp = d.singular_points.get(sp_index).ok_or(Error::Index(sp_index))?.clone();
    let new_cut = crate::exact::primitive(new_cut)?;
    let p = sp.position.clone();
    let (from, to, lin) = if clockwise {
        (new_cut, sp.cut, sp.linear())
    } else {
        (sp.cut, new_cut, sp.linear().unimodular_inverse()?)
    };
    let map = UnimodularAffineMap::about(lin, &p)?;
    let mut pieces: Vec<Wall> = vec![];
    for w in &d.walls {
        let arms = w.support.arms_at(&p);
        if arms.is_empty() {
            let probe = match &w.support {
                Support::Segment { start, end, .. } => start.midpoint(end),
                s => s.point_at(&rat(1)),
            };
            let dir = (probe - p.clone()).primitive_direction()?;
            if strictly_inside(from, dir, to) {
                pieces.push(Wall::new(w.support.map(&map), w.function.map_exponents(&lin))?);
            } else {
                pieces.push(w.clone());
            }
            continue;
        }
        for r in arms {
            let piece = match &w.support {
                Support::Line { .. } => Support::Ray { base: p.clone(), dir: r },
                Support::Ray { base, dir } => {
                    if r == *dir {
                        Support::Ray { base: p.clone(), dir: r }
                    } else {
                        Support::segment(p.clone(), base.clone())?
                    }
                }
                Support::Segment { start, end, dir } => {
                    if r == *dir {
                        Support::segment(p.clone(), end.clone())?
                    } else {
                        Support::segment(p.clone(), start.clone())?
                    }
                }
            };
            if r == new_cut {
                return Err(Error::CutCrossesWall(format!("({}, {})", p.x, p.y)));
            }
            let (piece, f) = if strictly_inside(from, r, to) {
                (piece.map(&map), w.function.map_exponents(&lin))
            } else {
                (piece, w.function.clone())
            };
            pieces.push(Wall::new(piece, f)?);
        }
    }
    let mut out = d.clone();
    out.walls = merge_pieces(pieces)?;
    out.singular_points[sp_index] = SingularPoint::new(p, sp.linear(), new_cut)?;
    Ok(out)
}

/// Glue collinear pieces with equal functions that meet end to start.
fn merge_pieces(mut walls: Vec<Wall>) -> Result<Vec<Wall>> {
    loop {
        let mut merged = None;
        'outer: for i in 0..walls.len() {
            for j in 0..walls.len() {
                if i == j || walls[i].function != walls[j].function {
                    continue;
                }
                if let Some(s) = glue(&walls[i].support, &walls[j].support) {
                    merged = Some((i, j, s));
                    break 'outer;
                }
            }
        }
        match merged {
            None => return Ok(walls),
            Some((i, j, s)) => {
                let f = walls[i].function.clone();
                let (a, b) = if i > j { (i, j) } else { (j, i) };
                walls.remove(a);
                walls.remove(b);
                walls.push(Wall::new(s, f)?);
            }
        }
    }
}

fn glue(a: &Support, b: &Support) -> Option<Support> {
    let (a_start, a_end, a_dir) = match a {
        Support::Segment { start, end, dir } => (start.clone(), end.clone(), *dir),
        _ => return None,
    };
    match b {
        Support::Ray { base, dir } => {
            if *base == a_end && *dir == a_dir {
                return Some(Support::Ray { base: a_start, dir: a_dir });
            }
            if *base == a_start && *dir == -a_dir {
                return Some(Support::Ray { base: a_end, dir: *dir });
            }
            None
        }
        Support::Segment { start, end, dir } => {
            if *start == a_end && *dir == a_dir {
                Some(Support::Segment { start: a_start, end: end.clone(), dir: a_dir })
            } else if *start == a_start && *dir == -a_dir {
                Some(Support::Segment { start: a_end, end: end.clone(), dir: *dir })
            } else {
                None
            }
        }
        Support::Line { .. } => None,
    }
}

fn outgoing(dir: (i64, i64), exp: (i64, i64)) -> Result<Wall> {
    Wall::new(
        Support::ray(Vec2::zero(), Vec2::new(dir.0, dir.1))?,
        WallFunction::binomial_power(Vec2::new(exp.0, exp.1), 1)?,
    )
}

/// The canonical diagram of the degree 5 del Pezzo pair, both focus-focus
/// points at the origin.
pub fn dp5_canonical() -> Result<ScatteringDiagram> {
    let seed = Seed::standard(FiniteType::A2);
    let grading = Grading::from_basis(Vec2::new(1, 0), Vec2::new(0, 1))?;
    let mut d = ScatteringDiagram::empty(seed, Variant::X, grading, super::diagram::DEFAULT_ORDER);
    d.walls = vec![
        outgoing((1, 0), (-1, 0))?,
        outgoing((0, 1), (0, -1))?,
        outgoing((-1, 1), (1, -1))?,
        outgoing((-1, 0), (1, 0))?,
        outgoing((0, -1), (0, 1))?,
    ];
    let o = Vec2::zero();
    d.singular_points = vec![
        SingularPoint::new(o.clone(), Mat2([[1, -1], [0, 1]]), Vec2::new(3, -1))?,
        SingularPoint::new(o, Mat2([[1, 0], [1, 1]]), Vec2::new(2, -1))?,
    ];
    Ok(d)
}

/// One singular point slid out to (3, 0), the other's cut swung into the upper-left wedge.
pub fn dp5_partially_pushed() -> Result<ScatteringDiagram> {
    let d = move_worm(&dp5_canonical()?, 0, WormParam::At(rat(3)))?;
    recut(&d, 1, Vec2::new(-1, 2), true)
}

/// Both singular points off the origin, at (1, 0) and (0, 1).
pub fn dp5_monodromy_diagram() -> Result<ScatteringDiagram> {
    let d = move_worm(&dp5_partially_pushed()?, 1, WormParam::At(rat(1)))?;
    move_worm(&d, 0, WormParam::At(rat(1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sector_test() {
        assert!(strictly_inside(Vec2::new(-1, 2), Vec2::new(-1, 0), Vec2::new(2, -1)));
        assert!(!strictly_inside(Vec2::new(-1, 2), Vec2::new(1, 0), Vec2::new(2, -1)));
        assert!(!strictly_inside(Vec2::new(-1, 2), Vec2::new(-1, 2), Vec2::new(2, -1)));
    }
}
