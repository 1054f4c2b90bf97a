use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{half_plane_shear, primitive, rat, FiniteType, LatticeVec, Rat, SkewForm, Vec2};

/// Which of the two cluster varieties the diagram lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    A,
    X,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::A => "A",
            Variant::X => "X",
        })
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Variant::A),
            "X" | "x" => Ok(Variant::X),
            _ => Err(Error::Invalid(format!("unknown variant {s}"))),
        }
    }
}

/// Seed data: the fixed skew form in standard coordinates and a basis.
///
/// Multipliers stay attached to indices under mutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Seed {
    fixed: SkewForm,
    basis: [LatticeVec; 2],
    label: FiniteType,
}

impl Seed {
    pub fn new(fixed: SkewForm, basis: [LatticeVec; 2]) -> Result<Self> {
        if basis[0].det(&basis[1]).abs() != 1 {
            return Err(Error::BadBasis);
        }
        let label = fixed.finite_type()?;
        Ok(Seed { fixed, basis, label })
    }

    pub fn standard(t: FiniteType) -> Self {
        Seed::new(SkewForm::standard(t), [Vec2::new(1, 0), Vec2::new(0, 1)]).expect("standard seed")
    }

    pub fn basis(&self) -> [LatticeVec; 2] {
        self.basis
    }

    pub fn label(&self) -> FiniteType {
        self.label
    }

    pub fn fixed_form(&self) -> &SkewForm {
        &self.fixed
    }

    /// The form with value {e1, e2} of the current basis.
    pub fn skew(&self) -> SkewForm {
        SkewForm {
            value: self.fixed.pair(self.basis[0], self.basis[1]),
            d1: self.fixed.d1,
            d2: self.fixed.d2,
        }
    }

    pub fn d(&self, i: usize) -> i64 {
        self.fixed.d(i)
    }

    /// Exchange integer eps_{jk} = {e_j, e_k} d_k.
    pub fn exchange(&self, j: usize, k: usize) -> Rat {
        self.fixed.pair(self.basis[j], self.basis[k]) * rat(self.d(k))
    }

    /// p*(e_i) in coordinates dual to the standard basis.
    pub fn v_dual(&self, i: usize) -> (Rat, Rat) {
        let a = self.basis[i];
        let e = self.fixed.value.clone();
        (-e.clone() * rat(a.y), e * rat(a.x))
    }

    /// p*(e_i) in the exponent lattice of the variant.
    pub fn v(&self, i: usize, variant: Variant) -> Result<LatticeVec> {
        let (vx, vy) = self.v_dual(i);
        let (vx, vy) = match variant {
            Variant::X => (vx, vy),
            Variant::A => (vx * rat(self.fixed.d1), vy * rat(self.fixed.d2)),
        };
        to_lattice(&vx, &vy)
    }

    /// Primitive normal of the wall e_i^perp in exponent coordinates.
    pub fn normal(&self, i: usize, variant: Variant) -> LatticeVec {
        let a = self.basis[i];
        match variant {
            Variant::X => a,
            Variant::A => {
                let n = Vec2::new(a.x * self.fixed.d2, a.y * self.fixed.d1);
                primitive(n).expect("basis vector is nonzero")
            }
        }
    }

    /// The piecewise-linear map T_k on the exponent lattice.
    pub fn cluster_shear(&self, k: usize, variant: Variant) -> Result<ClusterShear> {
        let n = self.normal(k, variant);
        let a = self.basis[k];
        // <d_k e_k, m> = lambda <n, m>
        let lambda = match variant {
            Variant::X => rat(self.d(k)),
            Variant::A => {
                let fx = Rat::new(a.x.into(), self.fixed.d1.into());
                let fy = Rat::new(a.y.into(), self.fixed.d2.into());
                let scale = if !n.x.is_zero() { fx / rat(n.x) } else { fy / rat(n.y) };
                scale * rat(self.d(k))
            }
        };
        let (vx, vy) = match variant {
            Variant::X => self.v_dual(k),
            Variant::A => {
                let (x, y) = self.v_dual(k);
                (x * rat(self.fixed.d1), y * rat(self.fixed.d2))
            }
        };
        let v = to_lattice(&(vx * lambda.clone()), &(vy * lambda))?;
        Ok(ClusterShear { n, v })
    }
}

fn to_lattice(x: &Rat, y: &Rat) -> Result<LatticeVec> {
    if !x.is_integer() || !y.is_integer() {
        return Err(Error::Invalid("seed data is not integral".into()));
    }
    let c = |r: &Rat| r.to_integer().to_i64().ok_or_else(|| Error::Invalid("overflow".into()));
    Ok(Vec2::new(c(x)?, c(y)?))
}

/// m -> m + [<n,m>]_+ v with <n,v> = 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ClusterShear {
    pub n: LatticeVec,
    pub v: LatticeVec,
}

impl ClusterShear {
    pub fn apply(&self, m: LatticeVec) -> LatticeVec {
        half_plane_shear(&self.v, &self.n, &m).expect("v lies on the fixed line")
    }

    pub fn apply_rat(&self, m: &crate::exact::RatVec) -> crate::exact::RatVec {
        half_plane_shear(&self.v.to_rat(), &self.n.to_rat(), m).expect("v lies on the fixed line")
    }

    /// Inverse of the piecewise map: m - [<n,m>]_+ v.
    pub fn inverse_apply(&self, m: LatticeVec) -> LatticeVec {
        crate::exact::half_plane_shear_inv(&self.v, &self.n, &m).expect("v lies on the fixed line")
    }

    pub fn inverse(&self) -> ClusterShear {
        ClusterShear { n: self.n, v: -self.v }
    }

    /// Linear map of the closed half-plane on the given side (+1 or -1).
    pub fn linear_piece(&self, side: i64) -> crate::exact::Mat2 {
        if side > 0 {
            crate::exact::Mat2([[1 + self.v.x * self.n.x, self.v.x * self.n.y], [self.v.y * self.n.x, 1 + self.v.y * self.n.y]])
        } else {
            crate::exact::Mat2::IDENTITY
        }
    }
}

/// Rank-2 seed mutation, plus convention:
/// e'_k = -e_k, e'_j = e_j + [eps_jk]_+ e_k.
pub fn seed_mutate(s: &Seed, k: usize) -> Result<Seed> {
    if k > 1 {
        return Err(Error::Index(k));
    }
    let j = 1 - k;
    let b = s.exchange(j, k);
    if !b.is_integer() {
        return Err(Error::Invalid("exchange value not integral".into()));
    }
    let c = if b.is_positive() { b.to_integer().to_i64().unwrap_or(0) } else { 0 };
    let mut basis = s.basis;
    basis[k] = -s.basis[k];
    basis[j] = s.basis[j] + s.basis[k] * c;
    Seed::new(s.fixed.clone(), basis)
}

/// Cone rays {<n_0,m> >= 0, <n_1,m> >= 0} of a seed, ordered (r0, r1).
pub fn seed_cone(s: &Seed, variant: Variant) -> Result<[LatticeVec; 2]> {
    let n0 = s.normal(0, variant);
    let n1 = s.normal(1, variant);
    let mut r0 = primitive(Vec2::new(-n1.y, n1.x))?;
    if n0.dot(&r0) < 0 {
        r0 = -r0;
    }
    let mut r1 = primitive(Vec2::new(-n0.y, n0.x))?;
    if n1.dot(&r1) < 0 {
        r1 = -r1;
    }
    Ok([r0, r1])
}

/// Chambers of the seeds met by alternating mutation, pulled back to the
/// coordinates of the starting seed.
pub fn chamber_orbit(s: &Seed, start: usize, steps: usize, variant: Variant) -> Result<Vec<[LatticeVec; 2]>> {
    let mut seed = s.clone();
    let mut k = start;
    let mut shears: Vec<ClusterShear> = vec![];
    let mut out = vec![seed_cone(&seed, variant)?];
    for _ in 0..steps {
        shears.push(seed.cluster_shear(k, variant)?);
        seed = seed_mutate(&seed, k)?;
        k = 1 - k;
        let mut cone = seed_cone(&seed, variant)?;
        for t in shears.iter().rev() {
            for r in cone.iter_mut() {
                *r = primitive(t.inverse_apply(*r))?;
            }
        }
        out.push(cone);
    }
    Ok(out)
}

/// First return of the pulled-back chamber (as a set of rays) under alternating mutation.
pub fn chamber_period(s: &Seed, start: usize, variant: Variant) -> Result<Option<usize>> {
    let orbit = chamber_orbit(s, start, 24, variant)?;
    let key = |c: &[LatticeVec; 2]| {
        let mut v = c.to_vec();
        v.sort();
        v
    };
    let first = key(&orbit[0]);
    Ok(orbit.iter().skip(1).position(|c| key(c) == first).map(|i| i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn involution_on_exchange_data() {
        for t in [FiniteType::A1xA1, FiniteType::A2, FiniteType::B2, FiniteType::G2] {
            let s = Seed::standard(t);
            for k in 0..2 {
                let back = seed_mutate(&seed_mutate(&s, k).unwrap(), k).unwrap();
                assert_eq!(back.label(), s.label());
                assert_eq!(back.skew(), s.skew());
                assert_eq!(back.exchange(0, 1), s.exchange(0, 1));
            }
        }
    }

    #[test]
    fn plus_convention_bases_are_not_periodic_like_chambers() {
        // bases alone return after 4 steps from index 1
        let s0 = Seed::standard(FiniteType::A2);
        let mut s = s0.clone();
        for k in [0, 1, 0, 1] {
            s = seed_mutate(&s, k).unwrap();
        }
        assert_eq!(s, s0);
    }

    #[test]
    fn chamber_orbit_closes() {
        for v in [Variant::X, Variant::A] {
            for start in 0..2 {
                assert_eq!(chamber_period(&Seed::standard(FiniteType::A2), start, v).unwrap(), Some(5));
                assert_eq!(chamber_period(&Seed::standard(FiniteType::B2), start, v).unwrap(), Some(6));
                assert_eq!(chamber_period(&Seed::standard(FiniteType::G2), start, v).unwrap(), Some(8));
            }
        }
    }

    #[test]
    fn cluster_shear_data() {
        let s = Seed::standard(FiniteType::A2);
        let t = s.cluster_shear(0, Variant::X).unwrap();
        assert_eq!(t.n, Vec2::new(1, 0));
        assert_eq!(t.v, Vec2::new(0, 1));
        let b = Seed::standard(FiniteType::B2);
        let ta = b.cluster_shear(1, Variant::A).unwrap();
        assert_eq!(ta.n, Vec2::new(0, 1));
        assert_eq!(ta.v, Vec2::new(-1, 0));
        assert_eq!(b.v(0, Variant::A).unwrap(), Vec2::new(0, 2));
        assert_eq!(b.v(1, Variant::X).unwrap(), Vec2::new(-1, 0));
    }
}
