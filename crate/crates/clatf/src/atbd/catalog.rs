use num_traits::Zero;

use super::diagram::{Atbd, Node};
use crate::error::{Error, Result};
use crate::exact::{ratio, LatticeVec, RatVec, Vec2};

pub const CATALOG: [&str; 10] =
    ["dp5_00", "dp5_cycle", "dp5_5tori", "dp8", "dp4_3tori", "dp6", "dp6_scat", "dp5_3tori", "dp3", "dp4_8tori"];

/// Polygon {x : <n_i, x> >= -1} for normals listed counterclockwise.
pub fn monotone_polygon(normals: &[(i64, i64)]) -> Result<Atbd> {
    let n = normals.len();
    let mut vs = Vec::with_capacity(n);
    for i in 0..n {
        let a: LatticeVec = Vec2::new(normals[i].0, normals[i].1);
        let b: LatticeVec = Vec2::new(normals[(i + 1) % n].0, normals[(i + 1) % n].1);
        let d = a.det(&b);
        if d <= 0 {
            return Err(Error::BadPolygon("normals must turn counterclockwise".into()));
        }
        vs.push(Vec2::new(ratio(a.y - b.y, d), ratio(b.x - a.x, d)));
    }
    Atbd::new(vs, vec![], Some(Vec2::zero()))
}

fn vertex(a: &Atbd, at: (i64, i64)) -> Result<usize> {
    let v = RatVec::from_ints(at.0, at.1);
    a.boundary.iter().position(|w| *w == v).ok_or_else(|| Error::Invalid(format!("no vertex at {at:?}")))
}

fn node_with(a: &Atbd, dir: (i64, i64)) -> Result<usize> {
    let d: LatticeVec = Vec2::new(dir.0, dir.1);
    a.nodes.iter().position(|n| n.direction == d).ok_or_else(|| Error::Invalid(format!("no node with direction {dir:?}")))
}

/// Add `unfrozen` and `frozen` nodes whose cuts run from the monotone point side into the vertex.
fn smooth(a: &Atbd, at: (i64, i64), unfrozen: usize, frozen: usize) -> Result<Atbd> {
    let i = vertex(a, at)?;
    let p = a.monotone_point()?;
    let dir = (a.boundary[i].clone() - p.clone()).primitive_direction()?;
    let mut out = a.clone();
    for k in 0..unfrozen + frozen {
        out.nodes.push(Node::new(p.clone(), dir, k >= unfrozen)?);
    }
    out.respace()
}

fn half() -> crate::exact::Rat {
    ratio(1, 2)
}

fn dp5_00() -> Result<Atbd> {
    let p = Atbd::toric(&[(1, 0), (0, 1), (-1, 0), (0, -1), (1, -1)])?;
    smooth(&smooth(&p, (0, 1), 1, 0)?, (-1, 0), 1, 0)
}

fn dp6() -> Result<Atbd> {
    let mut h = Atbd::toric(&[(-1, 0), (0, -1), (1, -1), (1, 0), (0, 1), (-1, 1)])?;
    for at in [(1, -1), (1, 0), (-1, 1)] {
        let i = vertex(&h, at)?;
        h = h.nodal_trade(i, &half())?;
    }
    let h = h.respace()?;
    h.mutate(node_with(&h, (-1, 1))?)?.respace()
}

/// Alternately mutate the group of two and the group of one, `steps` times.
pub fn dp6_alternating(steps: usize) -> Result<Atbd> {
    let mut a = dp6()?;
    for s in 0..steps {
        let want = if s % 2 == 0 { 2 } else { 1 };
        let j = (0..a.nodes.len())
            .find(|&j| a.group_of(j).map(|g| g.len() == want).unwrap_or(false))
            .ok_or_else(|| Error::Invalid("group sizes changed".into()))?;
        a = a.mutate(j)?;
    }
    a.respace()
}

fn dp6_scat() -> Result<Atbd> {
    let a = dp6_alternating(5)?;
    let p = a.monotone_point()?;
    let pair = (0..a.nodes.len()).find(|&j| a.group_of(j).map(|g| g.len() == 2).unwrap_or(false)).ok_or(Error::NotDelzant)?;
    let single = (0..a.nodes.len()).find(|&j| a.group_of(j).map(|g| g.len() == 1).unwrap_or(false)).ok_or(Error::NotDelzant)?;
    let target = a.boundary_hit(&p, a.nodes[single].direction)?;
    let b = a.inverse_nodal_trade(pair)?;
    let i = b.boundary.iter().position(|v| *v == target).ok_or(Error::NotDelzant)?;
    b.nodal_trade(i, &ratio(1, 4))?.respace()
}

pub fn seed_catalog(name: &str) -> Result<Atbd> {
    match name {
        "dp5_00" | "dp5_cycle" => dp5_00(),
        "dp5_5tori" => {
            let a = dp5_00()?;
            let a = a.mutate(node_with(&a, (0, 1))?)?;
            let a = a.nodal_trade(vertex(&a, (1, -1))?, &half())?;
            a.freeze(node_with(&a, (-1, 1))?)?.respace()
        }
        "dp8" => {
            let mut a = Atbd::toric(&[(-1, 0), (0, -1), (2, -1), (-1, 2)])?;
            for at in [(-1, 0), (0, -1)] {
                a = a.nodal_trade(vertex(&a, at)?, &half())?;
            }
            a.respace()
        }
        "dp4_3tori" => {
            let a = dp5_00()?;
            a.blow_up_corner(vertex(&a, (1, 0))?)?.freeze_double_points()
        }
        "dp6" => dp6(),
        "dp6_scat" => dp6_scat(),
        "dp5_3tori" => {
            let a = dp6()?;
            a.blow_up_corner(vertex(&a, (0, 1))?)?.respace()
        }
        "dp3" => {
            let a = monotone_polygon(&[(0, -1), (1, 0), (1, 3), (-3, -1)])?;
            let a = smooth(&a, (0, 1), 3, 0)?;
            let a = smooth(&a, (-1, 0), 1, 1)?;
            let i = a.boundary.iter().position(|v| *v == Vec2::new(ratio(1, 2), ratio(-1, 2))).ok_or(Error::NotDelzant)?;
            let at = a.boundary[i].clone();
            let mut out = a.clone();
            for _ in 0..2 {
                out.nodes.push(Node::new(Vec2::zero(), at.primitive_direction()?, true)?);
            }
            out.respace()
        }
        "dp4_8tori" => {
            let a = monotone_polygon(&[(0, -1), (1, 0), (1, 1), (-1, 1), (-3, -1)])?;
            let a = smooth(&a, (0, 1), 3, 0)?;
            let a = smooth(&a, (0, -1), 0, 1)?;
            let at = Vec2::new(ratio(1, 2), ratio(-1, 2));
            let mut out = a.clone();
            out.nodes.push(Node::new(Vec2::zero(), at.primitive_direction()?, false)?);
            out.respace()
        }
        _ => Err(Error::UnknownCatalog(name.into())),
    }
}

/// Singularity data of a group of frozen nodes on one cut.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrozenVertexType {
    /// Number of frozen nodes, equal to the length of the chain of vanishing spheres.
    pub nodes: usize,
    /// A_n label when a chain of n-1 spheres is A_n.
    pub chain_label: String,
    /// A_n label when n counts the nodes.
    pub node_label: String,
    /// "double point", "triple point", ...: a point of multiplicity nodes + 1.
    pub point_label: String,
}

fn point_name(m: usize) -> String {
    match m {
        2 => "double point".into(),
        3 => "triple point".into(),
        4 => "quadruple point".into(),
        _ => format!("{m}-fold point"),
    }
}

pub fn frozen_vertex_type(a: &Atbd, group: &[usize]) -> Result<Option<FrozenVertexType>> {
    let Some(&first) = group.first() else {
        return Ok(None);
    };
    let head = a.nodes.get(first).ok_or(Error::Index(first))?;
    for &j in group {
        let nd = a.nodes.get(j).ok_or(Error::Index(j))?;
        if !nd.frozen {
            return Err(Error::Invalid("group contains an unfrozen node".into()));
        }
        let off = nd.position.clone() - head.position.clone();
        if nd.direction != head.direction || !head.direction.to_rat().det(&off).is_zero() {
            return Err(Error::NonCollinear);
        }
    }
    let k: usize = group.iter().map(|&j| a.nodes[j].multiplicity as usize).sum();
    Ok(Some(FrozenVertexType {
        nodes: k,
        chain_label: format!("A_{}", k + 1),
        node_label: format!("A_{k}"),
        point_label: point_name(k + 1),
    }))
}

/// Frozen nodes grouped by cut.
pub fn frozen_groups(a: &Atbd) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![];
    for (j, nd) in a.nodes.iter().enumerate() {
        if !nd.frozen {
            continue;
        }
        let same = |g: &Vec<usize>| {
            let h = &a.nodes[g[0]];
            h.direction == nd.direction && h.direction.to_rat().det(&(nd.position.clone() - h.position.clone())).is_zero()
        };
        match out.iter_mut().find(|g| same(g)) {
            Some(g) => g.push(j),
            None => out.push(vec![j]),
        }
    }
    out
}
