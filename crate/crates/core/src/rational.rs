//! Exact rationals and their `"p/q"` text form.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalParseError {
    #[error("malformed rational {0:?}: expected \"p/q\"")]
    Malformed(String),
    #[error("rational {0:?} has a non-positive denominator")]
    BadDenominator(String),
}

/// Parses `"p/q"` (or a bare integer `"p"`). The denominator must be positive.
pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    let text = text.trim();
    let malformed = || RationalParseError::Malformed(text.to_string());
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| malformed())?;
    if den.starts_with('-') || den.starts_with('+') {
        return Err(RationalParseError::BadDenominator(text.to_string()));
    }
    let den = BigInt::from_str(den).map_err(|_| malformed())?;
    if !den.is_positive() {
        return Err(RationalParseError::BadDenominator(text.to_string()));
    }
    Ok(Rational::new(num, den))
}

/// Always `"p/q"` in lowest terms, `q > 0`, including integers (`"1/1"`).
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn rational_to_f64(value: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or(f64::NAN)
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn is_probability(value: &Rational) -> bool {
    !value.is_negative() && *value <= Rational::one()
}

pub fn is_zero(value: &Rational) -> bool {
    value.is_zero()
}

/// Serde adapter for a `Rational` stored as `"p/q"`.
pub mod serde_pq {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        format_rational(value).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}
