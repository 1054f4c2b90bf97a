use num_traits::{One, Signed, Zero};

use crate::affine::{merge_collinear, PiecewiseShear};
use crate::error::{Error, Result};
use crate::exact::{primitive, ratio, LatticeVec, Mat2, Rat, RatVec, UnimodularAffineMap, Vec2};

/// A focus-focus node; its cut leaves `position` in `direction`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Node {
    pub position: RatVec,
    pub direction: LatticeVec,
    pub multiplicity: i64,
    pub frozen: bool,
}

impl Node {
    pub fn new(position: RatVec, direction: LatticeVec, frozen: bool) -> Result<Self> {
        Ok(Node { position, direction: primitive(direction)?, multiplicity: 1, frozen })
    }
}

/// Almost-toric base diagram: a polygon drawn in one chart, with nodes and cuts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atbd {
    pub boundary: Vec<RatVec>,
    pub nodes: Vec<Node>,
    pub monotone_hint: Option<RatVec>,
}

/// Local picture at a boundary vertex after undoing the shears of the cuts ending there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexStatus {
    pub vertex: RatVec,
    /// Total shear power of the cuts ending at the vertex.
    pub cuts: i64,
    /// det(incoming, unsheared outgoing): 1 is a smooth corner, 0 a smoothed one.
    pub det: i64,
}

fn cross(o: &RatVec, a: &RatVec, b: &RatVec) -> Rat {
    (a.clone() - o.clone()).det(&(b.clone() - o.clone()))
}

fn line_meet(p: &RatVec, d: LatticeVec, q: &RatVec, e: LatticeVec) -> Option<RatVec> {
    let (dr, er) = (d.to_rat(), e.to_rat());
    let den = dr.det(&er);
    if den.is_zero() {
        return None;
    }
    let t = (q.clone() - p.clone()).det(&er) / den;
    Some(p.clone() + dr.scale(&t))
}

fn on_line(p: &RatVec, d: LatticeVec, x: &RatVec) -> bool {
    d.to_rat().det(&(x.clone() - p.clone())).is_zero()
}

impl Atbd {
    pub fn new(boundary: Vec<RatVec>, nodes: Vec<Node>, monotone_hint: Option<RatVec>) -> Result<Self> {
        let mut boundary = merge_collinear(boundary);
        if boundary.len() < 3 {
            return Err(Error::BadPolygon("fewer than three vertices".into()));
        }
        let n = boundary.len();
        let area: Rat = (0..n).map(|i| boundary[i].det(&boundary[(i + 1) % n])).sum();
        if area.is_negative() {
            boundary.reverse();
        }
        let a = Atbd { boundary, nodes, monotone_hint };
        for node in &a.nodes {
            if !a.contains_interior(&node.position) {
                return Err(Error::Invalid(format!("node at ({}, {}) is not interior", node.position.x, node.position.y)));
            }
        }
        Ok(a)
    }

    /// Polygon with lattice vertices, no nodes, monotone point hinted at the origin.
    pub fn toric(points: &[(i64, i64)]) -> Result<Self> {
        Self::new(points.iter().map(|&(x, y)| RatVec::from_ints(x, y)).collect(), vec![], Some(Vec2::zero()))
    }

    pub fn contains_interior(&self, p: &RatVec) -> bool {
        let n = self.boundary.len();
        (0..n).all(|i| cross(&self.boundary[i], &self.boundary[(i + 1) % n], p).is_positive())
    }

    /// First point where the ray from `x` in direction `d` meets the boundary.
    pub fn boundary_hit(&self, x: &RatVec, d: LatticeVec) -> Result<RatVec> {
        let dr = d.to_rat();
        let n = self.boundary.len();
        let mut best: Option<Rat> = None;
        for i in 0..n {
            let a = &self.boundary[i];
            let e = self.boundary[(i + 1) % n].clone() - a.clone();
            let den = dr.det(&e);
            if den.is_zero() {
                continue;
            }
            let w = a.clone() - x.clone();
            let t = w.det(&e) / den.clone();
            let s = w.det(&dr) / den;
            if t.is_positive() && !s.is_negative() && s <= Rat::one() && best.as_ref().is_none_or(|b| t < *b) {
                best = Some(t);
            }
        }
        best.map(|t| x.clone() + dr.scale(&t)).ok_or(Error::SlideOff)
    }

    /// Common point of all cut lines, falling back to the hint.
    pub fn monotone_point(&self) -> Result<RatVec> {
        let mut found: Option<RatVec> = None;
        'outer: for (i, a) in self.nodes.iter().enumerate() {
            for b in &self.nodes[i + 1..] {
                if let Some(x) = line_meet(&a.position, a.direction, &b.position, b.direction) {
                    found = Some(x);
                    break 'outer;
                }
            }
        }
        let p = match (found, &self.monotone_hint) {
            (Some(x), _) => x,
            (None, Some(h)) => h.clone(),
            (None, None) => return Err(Error::MonotoneUndetermined),
        };
        if self.nodes.iter().all(|n| on_line(&n.position, n.direction, &p)) {
            Ok(p)
        } else {
            Err(Error::MonotoneUndetermined)
        }
    }

    fn edge_dirs(&self, i: usize) -> Result<(LatticeVec, LatticeVec)> {
        let n = self.boundary.len();
        let v = &self.boundary[i];
        let din = (v.clone() - self.boundary[(i + n - 1) % n].clone()).primitive_direction()?;
        let dout = (self.boundary[(i + 1) % n].clone() - v.clone()).primitive_direction()?;
        Ok((din, dout))
    }

    /// Nodes whose cut runs into boundary vertex `i`.
    pub fn nodes_at_vertex(&self, i: usize) -> Vec<usize> {
        let v = &self.boundary[i];
        (0..self.nodes.len())
            .filter(|&j| {
                let nd = &self.nodes[j];
                let w = v.clone() - nd.position.clone();
                on_line(&nd.position, nd.direction, v) && nd.direction.to_rat().dot(&w).is_positive()
            })
            .collect()
    }

    pub fn vertex_status(&self, i: usize) -> Result<VertexStatus> {
        let (din, dout) = self.edge_dirs(i)?;
        let at = self.nodes_at_vertex(i);
        let k: i64 = at.iter().map(|&j| self.nodes[j].multiplicity).sum();
        let w = match at.first() {
            Some(&j) => Mat2::shear(self.nodes[j].direction, k).apply(dout),
            None => dout,
        };
        Ok(VertexStatus { vertex: self.boundary[i].clone(), cuts: k, det: din.det(&w) })
    }

    pub fn vertex_statuses(&self) -> Result<Vec<VertexStatus>> {
        (0..self.boundary.len()).map(|i| self.vertex_status(i)).collect()
    }

    /// Every vertex is a smooth corner or a corner smoothed by its cuts.
    pub fn is_well_formed(&self) -> Result<bool> {
        Ok(self.vertex_statuses()?.iter().all(|s| s.det == 1 || (s.det == 0 && s.cuts > 0)))
    }

    /// Number of genuine corners, i.e. boundary components.
    pub fn divisor_count(&self) -> Result<usize> {
        Ok(self.vertex_statuses()?.iter().filter(|s| s.det == 1).count())
    }

    /// Lattice distances from the monotone point to every edge line.
    pub fn edge_distances(&self) -> Result<Vec<Rat>> {
        let p = self.monotone_point()?;
        let n = self.boundary.len();
        (0..n)
            .map(|i| {
                let a = &self.boundary[i];
                let d = (self.boundary[(i + 1) % n].clone() - a.clone()).primitive_direction()?;
                Ok(d.to_rat().det(&(p.clone() - a.clone())))
            })
            .collect()
    }

    pub fn map(&self, m: &UnimodularAffineMap) -> Result<Self> {
        let lin = m.matrix();
        let nodes = self
            .nodes
            .iter()
            .map(|nd| Ok(Node { position: m.apply(&nd.position), direction: primitive(lin.apply(nd.direction))?, ..nd.clone() }))
            .collect::<Result<Vec<_>>>()?;
        Atbd::new(self.boundary.iter().map(|v| m.apply(v)).collect(), nodes, self.monotone_hint.as_ref().map(|h| m.apply(h)))
    }

    /// Unfrozen nodes sharing the cut line and direction of node `i`.
    pub fn group_of(&self, i: usize) -> Result<Vec<usize>> {
        let nd = self.nodes.get(i).ok_or(Error::Index(i))?;
        Ok((0..self.nodes.len())
            .filter(|&j| {
                let o = &self.nodes[j];
                !o.frozen && o.direction == nd.direction && on_line(&nd.position, nd.direction, &o.position)
            })
            .collect())
    }

    pub fn freeze(&self, i: usize) -> Result<Self> {
        let mut out = self.clone();
        out.nodes.get_mut(i).ok_or(Error::Index(i))?.frozen = true;
        Ok(out)
    }

    /// Spread the nodes on each cut evenly between the monotone point and the boundary.
    pub fn respace(&self) -> Result<Self> {
        let p = self.monotone_point()?;
        let mut out = self.clone();
        let mut done = vec![false; self.nodes.len()];
        for i in 0..self.nodes.len() {
            if done[i] {
                continue;
            }
            let d = self.nodes[i].direction;
            let line: Vec<usize> = (0..self.nodes.len()).filter(|&j| self.nodes[j].direction == d).collect();
            let q = self.boundary_hit(&p, d)?;
            let g = line.len() as i64;
            for (slot, &j) in line.iter().enumerate() {
                out.nodes[j].position = p.clone() + (q.clone() - p.clone()).scale(&ratio(slot as i64 + 1, g + 1));
                done[j] = true;
            }
        }
        Ok(out)
    }

    /// Add a node at vertex `i`; its cut runs from `position - t * dir` to the vertex.
    fn push_node_at(&self, i: usize, dir: LatticeVec, t: &Rat, frozen: bool) -> Result<Self> {
        let v = &self.boundary[i];
        let pos = v.clone() - dir.to_rat().scale(t);
        if !self.contains_interior(&pos) {
            return Err(Error::TooLarge("node leaves the diagram".into()));
        }
        if let Ok(p) = self.monotone_point() {
            if on_line(&pos, dir, &p) && !dir.to_rat().dot(&(pos.clone() - p)).is_positive() {
                return Err(Error::TooLarge("node passes the monotone point".into()));
            }
        }
        let mut out = self.clone();
        out.nodes.push(Node::new(pos, dir, frozen)?);
        Ok(out)
    }

    /// Replace the corner at vertex `i` by a node at distance `t` with its cut back to the corner.
    pub fn nodal_trade(&self, i: usize, t: &Rat) -> Result<Self> {
        if i >= self.boundary.len() {
            return Err(Error::Index(i));
        }
        if !t.is_positive() {
            return Err(Error::Invalid("trade parameter must be positive".into()));
        }
        let st = self.vertex_status(i)?;
        if st.det != 1 {
            return Err(Error::NotDelzant);
        }
        let dir = match self.nodes_at_vertex(i).first() {
            Some(&j) => self.nodes[j].direction,
            None => {
                let (din, dout) = self.edge_dirs(i)?;
                primitive(din - dout)?
            }
        };
        self.push_node_at(i, dir, t, false)
    }

    /// Remove node `j`, restoring the corner its cut ends at.
    pub fn inverse_nodal_trade(&self, j: usize) -> Result<Self> {
        let nd = self.nodes.get(j).ok_or(Error::Index(j))?;
        let q = self.boundary_hit(&nd.position, nd.direction)?;
        let i = self.boundary.iter().position(|v| *v == q).ok_or_else(|| Error::Invalid("cut does not end at a vertex".into()))?;
        let mut out = self.clone();
        out.nodes.remove(j);
        if self.vertex_status(i)?.det != 0 || out.vertex_status(i)?.det != 1 {
            return Err(Error::NotDelzant);
        }
        Ok(out)
    }

    /// Move node `j` along its cut to lattice distance `t` from where the cut meets the boundary.
    pub fn nodal_slide(&self, j: usize, t: &Rat) -> Result<Self> {
        let nd = self.nodes.get(j).ok_or(Error::Index(j))?;
        if !t.is_positive() {
            return Err(Error::SlideOff);
        }
        let q = self.boundary_hit(&nd.position, nd.direction)?;
        let pos = q - nd.direction.to_rat().scale(t);
        if !self.contains_interior(&pos) {
            return Err(Error::SlideOff);
        }
        if let Ok(p) = self.monotone_point() {
            if !nd.direction.to_rat().dot(&(pos.clone() - p)).is_positive() {
                return Err(Error::SlideOff);
            }
        }
        let mut out = self.clone();
        out.nodes[j].position = pos;
        Ok(out)
    }

    /// Mutate through the monotone point at the whole group of node `i`.
    pub fn mutate(&self, i: usize) -> Result<Self> {
        let g = self.group_of(i)?.len();
        self.mutate_count(i, g)
    }

    /// Mutate `count` nodes of the group of node `i`, innermost first.
    pub fn mutate_count(&self, i: usize, count: usize) -> Result<Self> {
        let nd = self.nodes.get(i).ok_or(Error::Index(i))?;
        if nd.frozen {
            return Err(Error::FrozenNode);
        }
        let p = self.monotone_point()?;
        let u = nd.direction;
        let mut group = self.group_of(i)?;
        if count == 0 || count > group.len() {
            return Err(Error::Invalid("mutation count out of range".into()));
        }
        let dist = |j: usize| u.to_rat().dot(&(self.nodes[j].position.clone() - p.clone()));
        group.sort_by_key(|&j| dist(j));
        group.truncate(count);
        let m: i64 = group.iter().map(|&j| self.nodes[j].multiplicity).sum();
        let shear = PiecewiseShear::new(p.clone(), Vec2::new(-u.y * m, u.x * m), u)?;
        let boundary = shear.polygon(&self.boundary);
        let far = self.boundary_hit(&p, u)?;
        let reach = u.to_rat().dot(&(far - p.clone()));
        let mut nodes = Vec::with_capacity(self.nodes.len());
        let mut staged = Atbd { boundary, nodes: vec![], monotone_hint: Some(p.clone()) };
        let back = staged.boundary_hit(&p, -u)?;
        for (j, o) in self.nodes.iter().enumerate() {
            if group.contains(&j) {
                let f = dist(j) / reach.clone();
                nodes.push(Node { position: p.clone() + (back.clone() - p.clone()).scale(&f), direction: -u, ..o.clone() });
            } else {
                let dir = primitive(shear.transport_direction(&o.position, o.direction))?;
                nodes.push(Node { position: shear.apply(&o.position), direction: dir, ..o.clone() });
            }
        }
        staged.nodes = nodes;
        staged.monotone_hint = self.monotone_hint.clone();
        Atbd::new(staged.boundary, staged.nodes, staged.monotone_hint)
    }

    /// Cut the corner at vertex `i` by the line at lattice distance 1 from the monotone point.
    pub fn blow_up_corner(&self, i: usize) -> Result<Self> {
        let n = self.boundary.len();
        if i >= n {
            return Err(Error::Index(i));
        }
        let p = self.monotone_point()?;
        let inward = |k: usize| -> Result<LatticeVec> {
            let d = (self.boundary[(k + 1) % n].clone() - self.boundary[k].clone()).primitive_direction()?;
            Ok(Vec2::new(-d.y, d.x))
        };
        let nn = inward((i + n - 1) % n)? + inward(i)?;
        let level = |x: &RatVec| nn.to_rat().dot(&(x.clone() - p.clone())) + Rat::one();
        let mut out = vec![];
        for k in 0..n {
            let a = &self.boundary[k];
            let b = &self.boundary[(k + 1) % n];
            let (fa, fb) = (level(a), level(b));
            if !fa.is_negative() {
                out.push(a.clone());
            }
            if (fa.is_positive() && fb.is_negative()) || (fa.is_negative() && fb.is_positive()) {
                let t = fa.clone() / (fa - fb);
                out.push(a.clone() + (b.clone() - a.clone()).scale(&t));
            }
        }
        Atbd::new(out, self.nodes.clone(), self.monotone_hint.clone())
    }

    /// Put a frozen node on every corner that is a double point after its cuts.
    pub fn freeze_double_points(&self) -> Result<Self> {
        let p = self.monotone_point()?;
        let mut out = self.clone();
        for (i, st) in self.vertex_statuses()?.iter().enumerate() {
            if st.det == 2 {
                let dir = (self.boundary[i].clone() - p.clone()).primitive_direction()?;
                out.nodes.push(Node::new(p.clone(), dir, true)?);
            }
        }
        out.respace()
    }
}
