use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::matrix::Mat2;
use super::series::{fmt_terms, Grading, TruncatedSeries};
use super::vec::{LatticeVec, Vec2};

/// Exact Laurent polynomial with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Laurent {
    terms: BTreeMap<LatticeVec, BigInt>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn one() -> Self {
        Self::monomial(Vec2::new(0, 0), BigInt::one())
    }

    pub fn monomial(m: LatticeVec, c: BigInt) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    /// 1 + z^m
    pub fn binomial(m: LatticeVec) -> Self {
        let mut p = Self::one();
        p.add_term(m, BigInt::one());
        p
    }

    pub fn add_term(&mut self, m: LatticeVec, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> &BTreeMap<LatticeVec, BigInt> {
        &self.terms
    }

    pub fn coeff(&self, m: LatticeVec) -> BigInt {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(*m, c.clone());
        }
        p
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(*m, -c.clone());
        }
        p
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                p.add_term(*m1 + *m2, c1 * c2);
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    pub fn shift(&self, m: LatticeVec) -> Self {
        Laurent { terms: self.terms.iter().map(|(e, c)| (*e + m, c.clone())).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut p = Self::zero();
        for (m, k) in &self.terms {
            p.add_term(*m, k * c);
        }
        p
    }

    /// z^m -> z^{Lm}
    pub fn map_exponents(&self, l: &Mat2) -> Self {
        let mut p = Self::zero();
        for (m, c) in &self.terms {
            p.add_term(l.apply(*m), c.clone());
        }
        p
    }

    pub fn to_series(&self, grading: Grading, order: u32) -> TruncatedSeries {
        TruncatedSeries::from_terms(grading, order, self.terms.clone())
    }

    pub fn from_series(s: &TruncatedSeries) -> Self {
        Laurent { terms: s.terms().clone() }
    }

    pub fn from_terms<I: IntoIterator<Item = (LatticeVec, BigInt)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, &self.terms)
    }
}

/// num / den with Laurent numerator and denominator.
#[derive(Clone, Debug)]
pub struct RatFunc {
    pub num: Laurent,
    pub den: Laurent,
}

impl RatFunc {
    pub fn one() -> Self {
        RatFunc { num: Laurent::one(), den: Laurent::one() }
    }

    pub fn from_poly(p: Laurent) -> Self {
        RatFunc { num: p, den: Laurent::one() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        RatFunc { num: self.num.mul(&o.num), den: self.den.mul(&o.den) }
    }

    pub fn inv(&self) -> Self {
        RatFunc { num: self.den.clone(), den: self.num.clone() }
    }

    pub fn pow(&self, k: i64) -> Self {
        let b = if k < 0 { self.inv() } else { self.clone() };
        let e = k.unsigned_abs() as u32;
        RatFunc { num: b.num.pow(e), den: b.den.pow(e) }
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// num - den, the obstruction to being 1 (up to the denominator).
    pub fn defect(&self) -> Laurent {
        self.num.sub(&self.den)
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, o: &Self) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }
}

impl Eq for RatFunc {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_equality_by_cross_multiplication() {
        let x = Laurent::binomial(Vec2::new(1, 0));
        let a = RatFunc { num: x.pow(3), den: x.clone() };
        let b = RatFunc::from_poly(x.pow(2));
        assert_eq!(a, b);
        assert!(a.mul(&b.inv()).is_one());
        assert_eq!(RatFunc::from_poly(x.clone()).pow(-2).mul(&b), RatFunc::one());
    }

    #[test]
    fn binomial_square() {
        let p = Laurent::binomial(Vec2::new(1, 1)).pow(2);
        assert_eq!(p.coeff(Vec2::new(1, 1)), BigInt::from(2));
        assert_eq!(p.terms().len(), 3);
    }
}
