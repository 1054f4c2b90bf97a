use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::vec::{LatticeVec, Rat, Vec2};
use crate::error::{Error, Result};

/// m -> (gx m.x + gy m.y) / den, with den > 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Grading {
    pub gx: i64,
    pub gy: i64,
    pub den: i64,
}

impl Grading {
    pub fn new(gx: i64, gy: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Invalid("zero grading denominator".into()));
        }
        let g = gx.gcd(&gy).gcd(&den);
        let s = den.signum();
        Ok(Grading { gx: s * gx / g, gy: s * gy / g, den: s * den / g })
    }

    /// Sum of coordinates in the basis (w1, w2); both get grading 1.
    pub fn from_basis(w1: LatticeVec, w2: LatticeVec) -> Result<Self> {
        let d = w1.det(&w2);
        if d == 0 {
            return Err(Error::Invalid("grading basis is degenerate".into()));
        }
        Grading::new(w2.y - w1.y, w1.x - w2.x, d)
    }

    pub fn numerator(&self, m: LatticeVec) -> i64 {
        self.gx * m.x + self.gy * m.y
    }

    pub fn value(&self, m: LatticeVec) -> Rat {
        Rat::new(self.numerator(m).into(), self.den.into())
    }

    pub fn within(&self, m: LatticeVec, order: u32) -> bool {
        self.numerator(m) <= order as i64 * self.den
    }

    pub fn positive(&self, m: LatticeVec) -> bool {
        self.numerator(m) > 0
    }
}

/// Laurent series truncated above a grading order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    terms: BTreeMap<LatticeVec, BigInt>,
    order: u32,
    grading: Grading,
}

impl TruncatedSeries {
    pub fn zero(grading: Grading, order: u32) -> Self {
        TruncatedSeries { terms: BTreeMap::new(), order, grading }
    }

    pub fn one(grading: Grading, order: u32) -> Self {
        Self::monomial(grading, order, Vec2::new(0, 0), BigInt::one())
    }

    pub fn monomial(grading: Grading, order: u32, m: LatticeVec, c: BigInt) -> Self {
        let mut s = Self::zero(grading, order);
        s.add_term(m, c);
        s
    }

    pub fn from_terms<I: IntoIterator<Item = (LatticeVec, BigInt)>>(grading: Grading, order: u32, it: I) -> Self {
        let mut s = Self::zero(grading, order);
        for (m, c) in it {
            s.add_term(m, c);
        }
        s
    }

    pub fn add_term(&mut self, m: LatticeVec, c: BigInt) {
        if c.is_zero() || !self.grading.within(m, self.order) {
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

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn coeff(&self, m: LatticeVec) -> BigInt {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(Vec2::new(0, 0)).is_one()
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.grading != o.grading || self.order != o.order {
            return Err(Error::GradingMismatch);
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut s = self.clone();
        for (m, c) in &o.terms {
            s.add_term(*m, c.clone());
        }
        Ok(s)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut s = self.clone();
        for (m, c) in &o.terms {
            s.add_term(*m, -c.clone());
        }
        Ok(s)
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(self.mul_unchecked(o))
    }

    fn mul_unchecked(&self, o: &Self) -> Self {
        let mut s = Self::zero(self.grading, self.order);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                s.add_term(*m1 + *m2, c1 * c2);
            }
        }
        s
    }

    /// Multiply by the monomial c z^m.
    pub fn shift(&self, m: LatticeVec, c: &BigInt) -> Self {
        Self::from_terms(self.grading, self.order, self.terms.iter().map(|(e, k)| (*e + m, k * c)))
    }

    pub fn with_order(&self, order: u32) -> Self {
        Self::from_terms(self.grading, order, self.terms.clone())
    }

    /// Formal inverse of a series 1 + (terms of positive grading).
    pub fn inverse(&self) -> Result<Self> {
        let mut u = self.clone();
        if !u.coeff(Vec2::new(0, 0)).is_one() {
            return Err(Error::NonConvergent);
        }
        u.terms.remove(&Vec2::new(0, 0));
        if u.terms.keys().any(|m| !self.grading.positive(*m)) {
            return Err(Error::NonConvergent);
        }
        let neg_u = u.shift(Vec2::new(0, 0), &BigInt::from(-1));
        let mut out = Self::one(self.grading, self.order);
        let mut pw = Self::one(self.grading, self.order);
        loop {
            pw = pw.mul_unchecked(&neg_u);
            if pw.is_zero() {
                break;
            }
            out = out.add(&pw)?;
        }
        Ok(out)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut out = Self::one(self.grading, self.order);
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul_unchecked(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        Ok(out)
    }

    /// Lowest-grading nonconstant terms of self - 1.
    pub fn lowest_defect(&self) -> Option<(Rat, Vec<(LatticeVec, BigInt)>)> {
        let mut d = self.clone();
        d.add_term(Vec2::new(0, 0), -BigInt::one());
        let lo = d.terms.keys().map(|m| self.grading.value(*m)).min()?;
        let terms = d
            .terms
            .iter()
            .filter(|(m, _)| self.grading.value(**m) == lo)
            .map(|(m, c)| (*m, c.clone()))
            .collect();
        Some((lo, terms))
    }
}

pub fn series_mul(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries> {
    a.mul(b)
}

pub fn series_inverse(a: &TruncatedSeries) -> Result<TruncatedSeries> {
    a.inverse()
}

/// Binomial coefficient c choose k for any integer c.
pub fn binomial(c: i64, k: u64) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(c) - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// (1 + z^m)^c truncated at `order`.
pub fn series_pow_binomial(m: LatticeVec, c: i64, order: u32, grading: Grading) -> Result<TruncatedSeries> {
    if !grading.positive(m) {
        return Err(Error::NonConvergent);
    }
    let mut s = TruncatedSeries::zero(grading, order);
    let mut k: u64 = 0;
    loop {
        let e = Vec2::new(m.x * k as i64, m.y * k as i64);
        if !grading.within(e, order) {
            break;
        }
        s.add_term(e, binomial(c, k));
        if c >= 0 && k as i64 >= c {
            break;
        }
        k += 1;
    }
    Ok(s)
}

pub(crate) fn fmt_terms(f: &mut fmt::Formatter<'_>, terms: &BTreeMap<LatticeVec, BigInt>) -> fmt::Result {
    if terms.is_empty() {
        return f.write_str("0");
    }
    let mut first = true;
    for (m, c) in terms {
        let neg = c.is_negative();
        let a = c.abs();
        if first {
            if neg {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if neg { " - " } else { " + " })?;
        }
        first = false;
        if m.is_zero() {
            write!(f, "{a}")?;
        } else {
            if !a.is_one() {
                write!(f, "{a}")?;
            }
            write!(f, "z^({},{})", m.x, m.y)?;
        }
    }
    Ok(())
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, &self.terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn std_grading() -> Grading {
        Grading::from_basis(Vec2::new(1, 0), Vec2::new(0, 1)).unwrap()
    }

    fn s(order: u32, t: &[((i64, i64), i64)]) -> TruncatedSeries {
        TruncatedSeries::from_terms(std_grading(), order, t.iter().map(|((x, y), c)| (Vec2::new(*x, *y), BigInt::from(*c))))
    }

    #[test]
    fn grading_of_basis() {
        let g = Grading::from_basis(Vec2::new(0, 1), Vec2::new(-1, 0)).unwrap();
        assert_eq!(g.numerator(Vec2::new(0, 1)), 1);
        assert_eq!(g.numerator(Vec2::new(-1, 0)), 1);
        assert_eq!(g.numerator(Vec2::new(-1, 1)), 2);
        let h = Grading::from_basis(Vec2::new(0, 2), Vec2::new(-1, 0)).unwrap();
        assert_eq!(h.value(Vec2::new(0, 1)), Rat::new(1.into(), 2.into()));
    }

    #[test]
    fn mul_examples() {
        let a = s(2, &[((0, 0), 1), ((1, 0), 1)]);
        let b = s(2, &[((0, 0), 1), ((0, 1), 1)]);
        assert_eq!(series_mul(&a, &b).unwrap(), s(2, &[((0, 0), 1), ((1, 0), 1), ((0, 1), 1), ((1, 1), 1)]));
        assert_eq!(series_mul(&a, &a).unwrap(), s(2, &[((0, 0), 1), ((1, 0), 2), ((2, 0), 1)]));
        let a3 = s(3, &[((0, 0), 1), ((1, 0), 1)]);
        let g = s(3, &[((0, 0), 1), ((1, 0), -1), ((2, 0), 1), ((3, 0), -1)]);
        assert!(series_mul(&a3, &g).unwrap().is_one());
        assert_eq!(series_mul(&a, &a3), Err(Error::GradingMismatch));
    }

    #[test]
    fn binomial_examples() {
        let g = std_grading();
        assert_eq!(series_pow_binomial(Vec2::new(1, 0), 1, 3, g).unwrap(), s(3, &[((0, 0), 1), ((1, 0), 1)]));
        assert_eq!(
            series_pow_binomial(Vec2::new(1, 0), -1, 3, g).unwrap(),
            s(3, &[((0, 0), 1), ((1, 0), -1), ((2, 0), 1), ((3, 0), -1)])
        );
        assert_eq!(series_pow_binomial(Vec2::new(1, 1), 2, 2, g).unwrap(), s(2, &[((0, 0), 1), ((1, 1), 2)]));
        assert_eq!(series_pow_binomial(Vec2::new(-1, 0), 2, 2, g), Err(Error::NonConvergent));
    }

    #[test]
    fn pow_matches_binomial() {
        let g = std_grading();
        let base = series_pow_binomial(Vec2::new(1, 2), 1, 9, g).unwrap();
        for c in -4..5 {
            assert_eq!(base.pow(c).unwrap(), series_pow_binomial(Vec2::new(1, 2), c, 9, g).unwrap());
        }
    }

    proptest! {
        #[test]
        fn inverse_is_inverse(coeffs in proptest::collection::vec(-5i64..5, 6), order in 1u32..7) {
            let exps = [(1, 0), (0, 1), (1, 1), (2, 0), (0, 3), (2, 1)];
            let mut t = vec![((0, 0), 1)];
            t.extend(exps.iter().zip(&coeffs).map(|(e, c)| (*e, *c)));
            let a = s(order, &t);
            let inv = series_inverse(&a).unwrap();
            prop_assert!(series_mul(&a, &inv).unwrap().is_one());
        }
    }
}
