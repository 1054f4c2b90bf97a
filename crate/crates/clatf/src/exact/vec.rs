use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

use crate::error::{Error, Result};

pub type Rat = BigRational;

/// Exact ordered scalar usable as a planar coordinate.
pub trait Scalar: Clone + Ord + Hash + Debug + Signed + FromPrimitive {}

impl<T> Scalar for T where T: Clone + Ord + Hash + Debug + Signed + FromPrimitive {}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Vec2<S> {
    pub x: S,
    pub y: S,
}

pub type LatticeVec = Vec2<i64>;
pub type RatVec = Vec2<Rat>;

impl<S> Vec2<S> {
    pub const fn new(x: S, y: S) -> Self {
        Vec2 { x, y }
    }
}

impl<S: Scalar> Vec2<S> {
    pub fn zero() -> Self {
        Vec2::new(S::zero(), S::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn dot(&self, o: &Self) -> S {
        self.x.clone() * o.x.clone() + self.y.clone() * o.y.clone()
    }

    /// det[self, o]
    pub fn det(&self, o: &Self) -> S {
        self.x.clone() * o.y.clone() - self.y.clone() * o.x.clone()
    }

    pub fn scale(&self, k: &S) -> Self {
        Vec2::new(self.x.clone() * k.clone(), self.y.clone() * k.clone())
    }

    /// Rotation by a quarter turn counterclockwise.
    pub fn perp(&self) -> Self {
        Vec2::new(-self.y.clone(), self.x.clone())
    }

    fn half(&self) -> u8 {
        if self.y.is_positive() || (self.y.is_zero() && self.x.is_positive()) {
            0
        } else {
            1
        }
    }

    /// Compare the polar angles in [0, 2pi) of two nonzero vectors.
    pub fn angle_cmp(&self, o: &Self) -> Ordering {
        self.half().cmp(&o.half()).then_with(|| {
            let d = self.det(o);
            if d.is_positive() {
                Ordering::Less
            } else if d.is_negative() {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        })
    }

    /// Same ray from the origin (positive multiples).
    pub fn same_ray(&self, o: &Self) -> bool {
        self.det(o).is_zero() && self.dot(o).is_positive()
    }
}

impl<S: Scalar> Add for Vec2<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl<S: Scalar> Sub for Vec2<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl<S: Scalar> Neg for Vec2<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Vec2::new(-self.x, -self.y)
    }
}

impl<S: Scalar> Mul<S> for Vec2<S> {
    type Output = Self;
    fn mul(self, k: S) -> Self {
        Vec2::new(self.x * k.clone(), self.y * k)
    }
}

impl<S: Display> Display for Vec2<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl LatticeVec {
    pub fn to_rat(self) -> RatVec {
        Vec2::new(rat(self.x), rat(self.y))
    }
}

impl RatVec {
    pub fn from_ints(x: i64, y: i64) -> Self {
        Vec2::new(rat(x), rat(y))
    }

    pub fn to_lattice(&self) -> Option<LatticeVec> {
        if self.x.is_integer() && self.y.is_integer() {
            Some(Vec2::new(self.x.to_integer().to_i64()?, self.y.to_integer().to_i64()?))
        } else {
            None
        }
    }

    /// Integer multiple of `self` clearing denominators, made primitive.
    pub fn primitive_direction(&self) -> Result<LatticeVec> {
        if self.is_zero() {
            return Err(Error::ZeroVector);
        }
        let l = self.x.denom().lcm(self.y.denom());
        let x = (self.x.clone() * Rat::from_integer(l.clone())).to_integer();
        let y = (self.y.clone() * Rat::from_integer(l)).to_integer();
        let g = x.gcd(&y);
        let to = |v: BigInt| (v / &g).to_i64().ok_or_else(|| Error::Invalid("coordinate overflow".into()));
        Ok(Vec2::new(to(x)?, to(y)?))
    }

    pub fn midpoint(&self, o: &Self) -> Self {
        let h = ratio(1, 2);
        Vec2::new((self.x.clone() + o.x.clone()) * h.clone(), (self.y.clone() + o.y.clone()) * h)
    }
}

/// v / gcd(|x|, |y|).
pub fn primitive(v: LatticeVec) -> Result<LatticeVec> {
    let g = divisibility_index(v)?;
    Ok(Vec2::new(v.x / g, v.y / g))
}

pub fn divisibility_index(v: LatticeVec) -> Result<i64> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(v.x.gcd(&v.y))
}

/// m + <n,m> v on the closed half-plane <n,m> >= 0, identity elsewhere.
pub fn half_plane_shear<S: Scalar>(v: &Vec2<S>, n: &Vec2<S>, m: &Vec2<S>) -> Result<Vec2<S>> {
    if !n.dot(v).is_zero() {
        return Err(Error::ShearNotFixed);
    }
    let h = n.dot(m);
    if h.is_positive() {
        Ok(m.clone() + v.scale(&h))
    } else {
        Ok(m.clone())
    }
}

/// Inverse of [`half_plane_shear`] with the same data.
pub fn half_plane_shear_inv<S: Scalar>(v: &Vec2<S>, n: &Vec2<S>, m: &Vec2<S>) -> Result<Vec2<S>> {
    if !n.dot(v).is_zero() {
        return Err(Error::ShearNotFixed);
    }
    let h = n.dot(m);
    if h.is_positive() {
        Ok(m.clone() - v.scale(&h))
    } else {
        Ok(m.clone())
    }
}

pub fn lattice_to_scalar<S: Scalar>(v: LatticeVec) -> Vec2<S> {
    Vec2::new(S::from_i64(v.x).expect("i64 fits"), S::from_i64(v.y).expect("i64 fits"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lv(x: i64, y: i64) -> LatticeVec {
        Vec2::new(x, y)
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(primitive(lv(4, -6)).unwrap(), lv(2, -3));
        assert_eq!(primitive(lv(0, 5)).unwrap(), lv(0, 1));
        assert_eq!(primitive(lv(1, -1)).unwrap(), lv(1, -1));
        assert_eq!(primitive(lv(0, 0)), Err(Error::ZeroVector));
    }

    #[test]
    fn index_examples() {
        assert_eq!(divisibility_index(lv(2, -2)).unwrap(), 2);
        assert_eq!(divisibility_index(lv(3, 0)).unwrap(), 3);
        assert_eq!(divisibility_index(lv(2, 3)).unwrap(), 1);
        assert!(divisibility_index(lv(0, 0)).is_err());
    }

    #[test]
    fn shear_examples() {
        let v = lv(1, 0);
        let n = lv(0, 1);
        assert_eq!(half_plane_shear(&v, &n, &lv(2, 3)).unwrap(), lv(5, 3));
        assert_eq!(half_plane_shear(&v, &n, &lv(2, -3)).unwrap(), lv(2, -3));
        assert_eq!(half_plane_shear(&v, &n, &lv(7, 0)).unwrap(), lv(7, 0));
        assert_eq!(half_plane_shear(&lv(1, 1), &n, &lv(0, 1)), Err(Error::ShearNotFixed));
        let r = half_plane_shear(&v.to_rat(), &n.to_rat(), &Vec2::new(ratio(1, 2), ratio(1, 3))).unwrap();
        assert_eq!(r, Vec2::new(ratio(5, 6), ratio(1, 3)));
    }

    #[test]
    fn angles() {
        let dirs = [lv(1, 0), lv(1, 1), lv(0, 1), lv(-1, 0), lv(-1, -1), lv(0, -1), lv(2, -1)];
        for w in dirs.windows(2) {
            assert_eq!(w[0].angle_cmp(&w[1]), Ordering::Less);
        }
        assert_eq!(lv(2, 0).angle_cmp(&lv(1, 0)), Ordering::Equal);
    }

    proptest! {
        #[test]
        fn shear_bijective(x in -1000i64..1000, y in -1000i64..1000, vx in -5i64..5, vy in -5i64..5) {
            prop_assume!(vx != 0 || vy != 0);
            let v = lv(vx, vy);
            let n = lv(-vy, vx);
            let m = lv(x, y);
            let s = half_plane_shear(&v, &n, &m).unwrap();
            prop_assert_eq!(half_plane_shear_inv(&v, &n, &s).unwrap(), m);
        }

        #[test]
        fn primitive_scale_invariant(x in -100i64..100, y in -100i64..100, k in 1i64..50) {
            prop_assume!(x != 0 || y != 0);
            prop_assert_eq!(primitive(lv(k * x, k * y)).unwrap(), primitive(lv(x, y)).unwrap());
        }
    }
}
