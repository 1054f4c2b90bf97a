use std::ops::Mul;

use num_traits::Zero;

use super::vec::{lattice_to_scalar, rat, LatticeVec, RatVec, Scalar, Vec2};
use crate::error::{Error, Result};

/// Integer 2x2 matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2(pub [[i64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1, 0], [0, 1]]);

    pub fn from_columns(c0: LatticeVec, c1: LatticeVec) -> Self {
        Mat2([[c0.x, c1.x], [c0.y, c1.y]])
    }

    pub fn column(&self, j: usize) -> LatticeVec {
        Vec2::new(self.0[0][j], self.0[1][j])
    }

    pub fn det(&self) -> i64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn trace(&self) -> i64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn transpose(&self) -> Self {
        Mat2([[self.0[0][0], self.0[1][0]], [self.0[0][1], self.0[1][1]]])
    }

    /// Inverse of a determinant +-1 matrix.
    pub fn unimodular_inverse(&self) -> Result<Self> {
        let d = self.det();
        if d.abs() != 1 {
            return Err(Error::NotUnimodular(d));
        }
        let [[a, b], [c, e]] = self.0;
        Ok(Mat2([[e * d, -b * d], [-c * d, a * d]]))
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.unimodular_inverse()? } else { *self };
        let mut out = Mat2::IDENTITY;
        for _ in 0..k.unsigned_abs() {
            out = out * base;
        }
        Ok(out)
    }

    /// x -> x + k det(u, x) u, the shear fixing the direction u.
    pub fn shear(u: LatticeVec, k: i64) -> Self {
        Mat2([[1 - k * u.x * u.y, k * u.x * u.x], [-k * u.y * u.y, 1 + k * u.x * u.y]])
    }

    pub fn apply(&self, v: LatticeVec) -> LatticeVec {
        Vec2::new(self.0[0][0] * v.x + self.0[0][1] * v.y, self.0[1][0] * v.x + self.0[1][1] * v.y)
    }

    pub fn apply_s<S: Scalar>(&self, v: &Vec2<S>) -> Vec2<S> {
        let r0: Vec2<S> = lattice_to_scalar(Vec2::new(self.0[0][0], self.0[0][1]));
        let r1: Vec2<S> = lattice_to_scalar(Vec2::new(self.0[1][0], self.0[1][1]));
        Vec2::new(r0.dot(v), r1.dot(v))
    }

    pub fn apply_rat(&self, v: &RatVec) -> RatVec {
        self.apply_s(v)
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat2::IDENTITY
    }

    /// Fixed primitive direction of a nontrivial shear, if any.
    pub fn shear_axis(&self) -> Option<LatticeVec> {
        if self.det() != 1 || self.trace() != 2 || self.is_identity() {
            return None;
        }
        let n = Mat2([[self.0[0][0] - 1, self.0[0][1]], [self.0[1][0], self.0[1][1] - 1]]);
        let row = if n.0[0] != [0, 0] { n.0[0] } else { n.0[1] };
        super::vec::primitive(Vec2::new(-row[1], row[0])).ok()
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        let a = self.0;
        let b = o.0;
        let mut c = [[0i64; 2]; 2];
        for (i, row) in c.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(c)
    }
}

/// x -> linear x + translation with det(linear) = +-1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnimodularAffineMap {
    linear: Mat2,
    translation: RatVec,
}

impl UnimodularAffineMap {
    pub fn new(linear: Mat2, translation: RatVec) -> Result<Self> {
        let d = linear.det();
        if d.abs() != 1 {
            return Err(Error::NotUnimodular(d));
        }
        Ok(UnimodularAffineMap { linear, translation })
    }

    pub fn linear(linear: Mat2) -> Result<Self> {
        Self::new(linear, Vec2::zero())
    }

    pub fn identity() -> Self {
        UnimodularAffineMap { linear: Mat2::IDENTITY, translation: Vec2::zero() }
    }

    pub fn matrix(&self) -> Mat2 {
        self.linear
    }

    pub fn translation(&self) -> &RatVec {
        &self.translation
    }

    pub fn apply(&self, p: &RatVec) -> RatVec {
        self.linear.apply_rat(p) + self.translation.clone()
    }

    /// self after other.
    pub fn compose(&self, other: &Self) -> Self {
        let linear = self.linear * other.linear;
        debug_assert!(linear.det().abs() == 1);
        UnimodularAffineMap { linear, translation: self.apply(&other.translation) }
    }

    pub fn inverse(&self) -> Self {
        let inv = self.linear.unimodular_inverse().expect("constructor enforces det +-1");
        let t = inv.apply_rat(&self.translation);
        UnimodularAffineMap { linear: inv, translation: Vec2::new(-t.x, -t.y) }
    }

    /// Map fixing `center` with the given linear part.
    pub fn about(linear: Mat2, center: &RatVec) -> Result<Self> {
        let moved = linear.apply_rat(center);
        Self::new(linear, center.clone() - moved)
    }

    pub fn is_linear(&self) -> bool {
        self.translation.x.is_zero() && self.translation.y.is_zero()
    }
}

pub fn rat_vec(x: i64, y: i64) -> RatVec {
    Vec2::new(rat(x), rat(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::vec::ratio;
    use proptest::prelude::*;

    #[test]
    fn shears_match_monodromy_matrices() {
        assert_eq!(Mat2::shear(Vec2::new(1, 0), -1), Mat2([[1, -1], [0, 1]]));
        assert_eq!(Mat2::shear(Vec2::new(0, 1), -1), Mat2([[1, 0], [1, 1]]));
        assert_eq!(Mat2([[1, -1], [0, 1]]).shear_axis(), Some(Vec2::new(1, 0)));
        assert_eq!(Mat2([[1, 0], [1, 1]]).shear_axis(), Some(Vec2::new(0, 1)));
    }

    #[test]
    fn rejects_non_unimodular() {
        assert_eq!(UnimodularAffineMap::linear(Mat2([[2, 0], [0, 1]])), Err(Error::NotUnimodular(2)));
    }

    #[test]
    fn affine_about_point() {
        let c = Vec2::new(ratio(3, 1), ratio(1, 2));
        let m = UnimodularAffineMap::about(Mat2::shear(Vec2::new(1, 1), 2), &c).unwrap();
        assert_eq!(m.apply(&c), c);
        let p = rat_vec(5, -2);
        assert_eq!(m.inverse().apply(&m.apply(&p)), p);
    }

    proptest! {
        #[test]
        fn composition_stays_unimodular(ux in -3i64..3, uy in -3i64..3, k in -3i64..3, vx in -3i64..3, vy in -3i64..3, j in -3i64..3) {
            prop_assume!((ux, uy) != (0, 0) && (vx, vy) != (0, 0));
            let a = UnimodularAffineMap::linear(Mat2::shear(Vec2::new(ux, uy), k)).unwrap();
            let b = UnimodularAffineMap::new(Mat2::shear(Vec2::new(vx, vy), j), rat_vec(1, 2)).unwrap();
            let c = a.compose(&b);
            prop_assert_eq!(c.matrix().det().abs(), 1);
            let p = Vec2::new(ratio(1, 3), ratio(-7, 5));
            prop_assert_eq!(c.apply(&p), a.apply(&b.apply(&p)));
        }
    }
}
