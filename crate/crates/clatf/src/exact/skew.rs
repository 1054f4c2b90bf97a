use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};

use super::vec::{LatticeVec, Rat};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FiniteType {
    A1xA1,
    A2,
    B2,
    G2,
}

impl fmt::Display for FiniteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FiniteType::A1xA1 => "A1xA1",
            FiniteType::A2 => "A2",
            FiniteType::B2 => "B2",
            FiniteType::G2 => "G2",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for FiniteType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A1xA1" | "A1A1" => Ok(FiniteType::A1xA1),
            "A2" => Ok(FiniteType::A2),
            "B2" => Ok(FiniteType::B2),
            "G2" => Ok(FiniteType::G2),
            _ => Err(Error::Invalid(format!("unknown type {s}"))),
        }
    }
}

/// Rank-2 skew form, determined by {e1, e2}, with multipliers d1, d2.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewForm {
    pub value: Rat,
    pub d1: i64,
    pub d2: i64,
}

impl SkewForm {
    pub fn new(value: Rat, d1: i64, d2: i64) -> Result<Self> {
        if d1 <= 0 || d2 <= 0 {
            return Err(Error::Invalid("multipliers must be positive".into()));
        }
        Ok(SkewForm { value, d1, d2 })
    }

    /// The standard form realizing a finite type.
    pub fn standard(t: FiniteType) -> Self {
        let (v, d1, d2) = match t {
            FiniteType::A1xA1 => (0, 1, 1),
            FiniteType::A2 => (1, 1, 1),
            FiniteType::B2 => (1, 1, 2),
            FiniteType::G2 => (1, 1, 3),
        };
        SkewForm { value: Rat::from_integer(v.into()), d1, d2 }
    }

    pub fn d(&self, i: usize) -> i64 {
        if i == 0 {
            self.d1
        } else {
            self.d2
        }
    }

    /// {a, b} for a, b written in the standard basis.
    pub fn pair(&self, a: LatticeVec, b: LatticeVec) -> Rat {
        self.value.clone() * Rat::from_integer((a.x * b.y - a.y * b.x).into())
    }

    pub fn finite_type(&self) -> Result<FiniteType> {
        let a = self.value.abs() * Rat::from_integer(self.d1.into());
        let b = self.value.abs() * Rat::from_integer(self.d2.into());
        if !a.is_integer() || !b.is_integer() {
            return Err(Error::InfiniteType);
        }
        let p = (a * b).to_integer().to_i64().ok_or(Error::InfiniteType)?;
        match p {
            0 => Ok(FiniteType::A1xA1),
            1 => Ok(FiniteType::A2),
            2 => Ok(FiniteType::B2),
            3 => Ok(FiniteType::G2),
            _ => Err(Error::InfiniteType),
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.value.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::vec::ratio;

    #[test]
    fn classify() {
        for t in [FiniteType::A1xA1, FiniteType::A2, FiniteType::B2, FiniteType::G2] {
            assert_eq!(SkewForm::standard(t).finite_type().unwrap(), t);
        }
        assert_eq!(SkewForm::new(ratio(1, 2), 2, 4).unwrap().finite_type().unwrap(), FiniteType::B2);
        assert_eq!(SkewForm::new(ratio(2, 1), 1, 1).unwrap().finite_type(), Err(Error::InfiniteType));
    }
}
