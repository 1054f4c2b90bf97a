use crate::error::{Error, Result};
use crate::exact::{LatticeVec, Mat2, UnimodularAffineMap, Vec2};

/// Self-intersection numbers of a cycle of boundary curves.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LooijengaData {
    pub self_intersections: Vec<i64>,
}

impl LooijengaData {
    pub fn new(self_intersections: Vec<i64>) -> Result<Self> {
        if self_intersections.is_empty() {
            return Err(Error::Invalid("empty cycle".into()));
        }
        Ok(LooijengaData { self_intersections })
    }

    pub fn rotate(&self, k: usize) -> Self {
        let mut s = self.self_intersections.clone();
        let n = s.len();
        s.rotate_left(k % n);
        LooijengaData { self_intersections: s }
    }
}

/// Developed rays and chart transitions of the tropicalization, in the chart
/// where v_0 = (1,0) and v_1 = (0,1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropAtlas {
    pub rays: Vec<LatticeVec>,
    /// transitions[i] sends the frame (v_i, v_(i+1)) to (v_(i+1), v_(i+2)).
    pub transitions: Vec<Mat2>,
    pub total_monodromy: UnimodularAffineMap,
}

impl TropAtlas {
    /// v_i continued past the cycle by the monodromy.
    pub fn developed(&self, i: i64) -> LatticeVec {
        let n = self.rays.len() as i64;
        let m = self.total_monodromy.matrix().pow(i.div_euclid(n)).expect("unimodular");
        m.apply(self.rays[i.rem_euclid(n) as usize])
    }

    /// The chart psi_i written in the reference coordinates.
    pub fn chart(&self, i: usize) -> Mat2 {
        let i = i as i64;
        Mat2::from_columns(self.developed(i - 1), self.developed(i)).unimodular_inverse().expect("frame is unimodular")
    }
}

/// Charts psi_i with psi_i(v_(i-1)) = (1,0), psi_i(v_i) = (0,1),
/// psi_i(v_(i+1)) = (-1, -D_i^2), glued around the cycle.
pub fn tropicalize(l: &LooijengaData) -> Result<TropAtlas> {
    let d = &l.self_intersections;
    let n = d.len();
    // v_(i+1) = -v_(i-1) - D_i^2 v_i, starting from v_0, v_1 and using D_1, D_2, ...
    let mut v: Vec<LatticeVec> = vec![Vec2::new(1, 0), Vec2::new(0, 1)];
    for j in 1..=n {
        let di = d[j % n];
        let next = -v[j - 1] - v[j] * di;
        v.push(next);
    }
    let mut transitions = Vec::with_capacity(n);
    for i in 0..n {
        let from = Mat2::from_columns(v[i], v[i + 1]);
        let to = Mat2::from_columns(v[i + 1], v[i + 2]);
        transitions.push(to * from.unimodular_inverse()?);
    }
    let total = transitions.iter().fold(Mat2::IDENTITY, |acc, t| *t * acc);
    let rays = v[..n].to_vec();
    Ok(TropAtlas { rays, transitions, total_monodromy: UnimodularAffineMap::linear(total)? })
}
