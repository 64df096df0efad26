//! Exact rational frequencies (Bohr–Fourier exponents) and their extension
//! by ±∞, used for spectral endpoints of possibly empty spectra.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Signed};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrequencyError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("frequency arithmetic overflow")]
    Overflow,
    #[error("cannot parse frequency {0:?}: expected \"num/den\"")]
    Parse(String),
}

/// A reduced rational number `num/den` with `den >= 1`.
///
/// All arithmetic is exact. The checked methods report overflow of the
/// 64-bit numerator or denominator; the operator impls panic on it.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Frequency(Ratio<i64>);

impl Frequency {
    pub const ZERO: Frequency = Frequency::integer(0);
    pub const ONE: Frequency = Frequency::integer(1);

    pub fn new(num: i64, den: i64) -> Result<Self, FrequencyError> {
        if den == 0 {
            return Err(FrequencyError::ZeroDenominator);
        }
        // reduction negates both parts when den < 0
        if num == i64::MIN || den == i64::MIN {
            return Err(FrequencyError::Overflow);
        }
        Ok(Frequency(Ratio::new(num, den)))
    }

    pub const fn integer(n: i64) -> Self {
        Frequency(Ratio::new_raw(n, 1))
    }

    /// Shorthand for tests and fixtures; panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::new(num, den).expect("invalid frequency literal")
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.numer() == 0
    }

    pub fn is_positive(&self) -> bool {
        self.numer() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.numer() < 0
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(self) -> Self {
        Frequency(self.0.abs())
    }

    pub fn to_f64(self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self, FrequencyError> {
        self.0.checked_add(&rhs.0).map(Frequency).ok_or(FrequencyError::Overflow)
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self, FrequencyError> {
        self.0.checked_sub(&rhs.0).map(Frequency).ok_or(FrequencyError::Overflow)
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self, FrequencyError> {
        self.0.checked_mul(&rhs.0).map(Frequency).ok_or(FrequencyError::Overflow)
    }

    pub fn checked_div(self, rhs: Self) -> Result<Self, FrequencyError> {
        if rhs.is_zero() {
            return Err(FrequencyError::ZeroDenominator);
        }
        self.0.checked_div(&rhs.0).map(Frequency).ok_or(FrequencyError::Overflow)
    }

    pub fn checked_mul_int(self, k: i64) -> Result<Self, FrequencyError> {
        self.checked_mul(Frequency::integer(k))
    }

    /// Smallest integer `>= self`.
    pub fn ceil(self) -> i64 {
        self.0.ceil().to_integer()
    }

    /// Largest integer `<= self`.
    pub fn floor(self) -> i64 {
        self.0.floor().to_integer()
    }

    pub fn min(self, other: Self) -> Self {
        Ord::min(self, other)
    }

    pub fn max(self, other: Self) -> Self {
        Ord::max(self, other)
    }
}

impl Default for Frequency {
    fn default() -> Self {
        Frequency::ZERO
    }
}

impl From<i64> for Frequency {
    fn from(n: i64) -> Self {
        Frequency::integer(n)
    }
}

impl Neg for Frequency {
    type Output = Frequency;
    fn neg(self) -> Frequency {
        Frequency::ZERO.checked_sub(self).expect("frequency arithmetic overflow")
    }
}

macro_rules! panicking_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for Frequency {
            type Output = Frequency;
            fn $method(self, rhs: Frequency) -> Frequency {
                self.$checked(rhs).expect("frequency arithmetic overflow")
            }
        }
    };
}

panicking_op!(Add, add, checked_add);
panicking_op!(Sub, sub, checked_sub);
panicking_op!(Mul, mul, checked_mul);
panicking_op!(Div, div, checked_div);

impl Mul<i64> for Frequency {
    type Output = Frequency;
    fn mul(self, k: i64) -> Frequency {
        self.checked_mul_int(k).expect("frequency arithmetic overflow")
    }
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for Frequency {
    type Err = FrequencyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FrequencyError::Parse(s.to_string());
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: i64 = n.parse().map_err(|_| bad())?;
        let d: i64 = d.parse().map_err(|_| bad())?;
        Frequency::new(n, d)
    }
}

impl Serialize for Frequency {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", self.numer(), self.denom()))
    }
}

impl<'de> Deserialize<'de> for Frequency {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A frequency or one of the two infinities. Spectral endpoints of empty or
/// unbounded spectra take the infinite values.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Extended {
    NegInf,
    Finite(Frequency),
    PosInf,
}

impl Extended {
    pub const ZERO: Extended = Extended::Finite(Frequency::ZERO);

    pub fn finite(self) -> Option<Frequency> {
        match self {
            Extended::Finite(f) => Some(f),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    /// Multiplies by a non-negative rational, with `0 * ∞ = 0`.
    pub fn scale(self, k: Frequency) -> Extended {
        assert!(!k.is_negative(), "Extended::scale expects a non-negative factor");
        match self {
            Extended::Finite(f) => Extended::Finite(f * k),
            _ if k.is_zero() => Extended::ZERO,
            inf => inf,
        }
    }

    pub fn scale_int(self, k: i64) -> Extended {
        self.scale(Frequency::integer(k))
    }

    pub fn min(self, other: Self) -> Self {
        std::cmp::min(self, other)
    }

    pub fn max(self, other: Self) -> Self {
        std::cmp::max(self, other)
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Extended::NegInf => f64::NEG_INFINITY,
            Extended::Finite(f) => f.to_f64(),
            Extended::PosInf => f64::INFINITY,
        }
    }
}

impl From<Frequency> for Extended {
    fn from(f: Frequency) -> Self {
        Extended::Finite(f)
    }
}

impl Add for Extended {
    type Output = Extended;
    fn add(self, rhs: Extended) -> Extended {
        use Extended::*;
        match (self, rhs) {
            (Finite(a), Finite(b)) => Finite(a + b),
            (PosInf, NegInf) | (NegInf, PosInf) => panic!("indeterminate ∞ - ∞ in spectral arithmetic"),
            (PosInf, _) | (_, PosInf) => PosInf,
            (NegInf, _) | (_, NegInf) => NegInf,
        }
    }
}

impl Neg for Extended {
    type Output = Extended;
    fn neg(self) -> Extended {
        match self {
            Extended::NegInf => Extended::PosInf,
            Extended::Finite(f) => Extended::Finite(-f),
            Extended::PosInf => Extended::NegInf,
        }
    }
}

impl Sub for Extended {
    type Output = Extended;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, rhs: Extended) -> Extended {
        self + (-rhs)
    }
}

impl PartialEq<Frequency> for Extended {
    fn eq(&self, other: &Frequency) -> bool {
        *self == Extended::Finite(*other)
    }
}

impl PartialOrd<Frequency> for Extended {
    fn partial_cmp(&self, other: &Frequency) -> Option<Ordering> {
        Some(self.cmp(&Extended::Finite(*other)))
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::NegInf => f.write_str("-inf"),
            Extended::Finite(x) => write!(f, "{x}"),
            Extended::PosInf => f.write_str("inf"),
        }
    }
}

impl fmt::Debug for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(x) => write!(f, "{x:?}"),
            other => write!(f, "{other}"),
        }
    }
}

impl FromStr for Extended {
    type Err = FrequencyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "+inf" => Ok(Extended::PosInf),
            "-inf" => Ok(Extended::NegInf),
            other => other.parse().map(Extended::Finite),
        }
    }
}

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Extended::Finite(f) => f.serialize(s),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Extended {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
