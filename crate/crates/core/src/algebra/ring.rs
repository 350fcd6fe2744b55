//! Coefficient rings for chain complexes: the integers and the field with two elements.

use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use super::int::Int;

/// Coefficient ring used by the homology engines.
pub trait Ring: Clone + Debug + PartialEq + Send + Sync + 'static {
    const KIND: RingKind;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_int(v: &Int) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Inverse of a unit, `None` for non-units.
    fn unit_inverse(&self) -> Option<Self>;
    /// Lift to an integer representative.
    fn to_int(&self) -> Int;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RingKind {
    F2,
    Z,
}

impl RingKind {
    pub fn name(self) -> &'static str {
        match self {
            RingKind::F2 => "f2",
            RingKind::Z => "z",
        }
    }
}

impl std::str::FromStr for RingKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "f2" | "z2" | "z/2" => Ok(RingKind::F2),
            "z" | "int" | "integers" => Ok(RingKind::Z),
            other => Err(format!("unknown ring `{other}` (expected f2 or z)")),
        }
    }
}

/// The field with two elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct F2(pub bool);

impl Ring for F2 {
    const KIND: RingKind = RingKind::F2;
    fn zero() -> Self {
        F2(false)
    }
    fn one() -> Self {
        F2(true)
    }
    fn from_i64(v: i64) -> Self {
        F2(v.rem_euclid(2) == 1)
    }
    fn from_int(v: &Int) -> Self {
        F2(v.div_mod_floor(&Int::new(2)).1.is_one())
    }
    fn is_zero(&self) -> bool {
        !self.0
    }
    fn add(&self, other: &Self) -> Self {
        F2(self.0 ^ other.0)
    }
    fn mul(&self, other: &Self) -> Self {
        F2(self.0 & other.0)
    }
    fn neg(&self) -> Self {
        *self
    }
    fn unit_inverse(&self) -> Option<Self> {
        self.0.then_some(*self)
    }
    fn to_int(&self) -> Int {
        Int::new(self.0 as i64)
    }
}

impl Ring for Int {
    const KIND: RingKind = RingKind::Z;
    fn zero() -> Self {
        Int::new(0)
    }
    fn one() -> Self {
        Int::new(1)
    }
    fn from_i64(v: i64) -> Self {
        Int::new(v)
    }
    fn from_int(v: &Int) -> Self {
        v.clone()
    }
    fn is_zero(&self) -> bool {
        Int::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn unit_inverse(&self) -> Option<Self> {
        self.is_unit().then(|| self.clone())
    }
    fn to_int(&self) -> Int {
        self.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f2_arithmetic() {
        assert_eq!(F2::from_i64(-3), F2::one());
        assert_eq!(F2::one().add(&F2::one()), F2::zero());
        assert_eq!(F2::zero().unit_inverse(), None);
    }

    #[test]
    fn int_units() {
        assert_eq!(Int::new(-1).unit_inverse(), Some(Int::new(-1)));
        assert_eq!(Ring::unit_inverse(&Int::new(2)), None);
    }

    #[test]
    fn ring_kind_parse() {
        assert_eq!("Z".parse::<RingKind>().unwrap(), RingKind::Z);
        assert_eq!("f2".parse::<RingKind>().unwrap(), RingKind::F2);
        assert!("q".parse::<RingKind>().is_err());
    }
}
