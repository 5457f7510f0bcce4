//! Exact rationals used for `%` bounds, support fractions and acceptance
//! thresholds. Nothing in the engine touches floating point.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A rational number in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RationalError {
    #[error("`{0}` is not a numeral (expected an integer, a fraction `n/d` or a decimal)")]
    NotNumeral(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_integer(value: i64) -> Self {
        Rational(BigRational::from_integer(value.into()))
    }

    /// Ratio of two exact counts. Panics on a zero denominator.
    pub fn from_counts(numer: &BigUint, denom: &BigUint) -> Self {
        assert!(!denom.is_zero(), "zero denominator");
        Rational(BigRational::new(
            BigInt::from(numer.clone()),
            BigInt::from(denom.clone()),
        ))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// True when `0 <= self <= 1`.
    pub fn is_unit(&self) -> bool {
        !self.0.is_negative() && self.0 <= BigRational::one()
    }

    /// `1 - self`.
    pub fn complement(&self) -> Self {
        Rational(BigRational::one() - &self.0)
    }

    /// Numerator and denominator as `u64` when the value is non-negative and
    /// both fit. Used by the evaluator's fast comparison path.
    pub fn to_u64_pair(&self) -> Option<(u64, u64)> {
        use num_traits::ToPrimitive;
        if self.0.is_negative() {
            return None;
        }
        Some((self.0.numer().to_u64()?, self.0.denom().to_u64()?))
    }

    /// Whether `numer / denom` compares to `self` as `ord` would say, i.e.
    /// returns `cmp(self, numer/denom)` without building a rational.
    pub fn cmp_counts(&self, numer: u64, denom: u64) -> Ordering {
        debug_assert!(denom != 0);
        match self.to_u64_pair() {
            Some((a, b)) => (a as u128 * denom as u128).cmp(&(numer as u128 * b as u128)),
            None => {
                let lhs = self.0.numer() * BigInt::from(denom);
                let rhs = BigInt::from(numer) * self.0.denom();
                lhs.cmp(&rhs)
            }
        }
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Rational {
    fn from(value: BigRational) -> Self {
        Rational(value)
    }
}

impl FromStr for Rational {
    type Err = RationalError;

    /// Accepts `7`, `4/5`, `0.8` and `.8`. Decimals convert exactly: `0.125`
    /// is `125/1000` reduced.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let s = text.trim();
        let not_numeral = || RationalError::NotNumeral(text.to_string());
        let digits = |d: &str| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit());
        if let Some((n, d)) = s.split_once('/') {
            if !digits(n) || !digits(d) {
                return Err(not_numeral());
            }
            let n: BigInt = n.parse().map_err(|_| not_numeral())?;
            let d: BigInt = d.parse().map_err(|_| not_numeral())?;
            if d.is_zero() {
                return Err(RationalError::ZeroDenominator(text.to_string()));
            }
            return Ok(Rational(BigRational::new(n, d)));
        }
        if let Some((int, frac)) = s.split_once('.') {
            if !(int.is_empty() || digits(int)) || !digits(frac) {
                return Err(not_numeral());
            }
            let int = if int.is_empty() { "0" } else { int };
            let numer: BigInt = format!("{int}{frac}").parse().map_err(|_| not_numeral())?;
            let denom = num_traits::pow(BigInt::from(10u8), frac.len());
            return Ok(Rational(BigRational::new(numer, denom)));
        }
        if !digits(s) {
            return Err(not_numeral());
        }
        let n: BigInt = s.parse().map_err(|_| not_numeral())?;
        Ok(Rational(BigRational::from_integer(n)))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
