//! Exact rational helpers and the `"num/den"` text form used by every
//! serialized artifact.

use std::fmt::Write as _;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};
use thiserror::Error;

/// Exact rational used throughout the crate.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal {0:?}")]
    Invalid(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"n/d"` or a bare integer `"n"`.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let invalid = || ParseRationalError::Invalid(text.to_string());
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| invalid())?;
            let d: BigInt = d.trim().parse().map_err(|_| invalid())?;
            if d.is_zero() {
                return Err(ParseRationalError::ZeroDenominator(text.to_string()));
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = text.parse().map_err(|_| invalid())?;
            Ok(Rational::from_integer(n))
        }
    }
}

/// Always renders the denominator, so one is written `"1/1"`.
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Decimal rendering truncated toward zero to `digits` fractional digits.
/// For display only; never parsed back.
pub fn to_decimal(value: &Rational, digits: usize) -> String {
    let negative = value.is_negative();
    let abs = value.abs();
    let (whole, rem) = abs.numer().div_rem(abs.denom());
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    let _ = write!(out, "{whole}");
    if digits > 0 {
        out.push('.');
        let mut rem = rem;
        let ten = BigInt::from(10);
        for _ in 0..digits {
            rem *= &ten;
            let (digit, r) = rem.div_rem(abs.denom());
            let _ = write!(out, "{digit}");
            rem = r;
        }
    }
    out
}

/// Lossy conversion for diagnostics and plotting.
pub fn to_f64(value: &Rational) -> f64 {
    if let Some(v) = value.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Shift both sides down so the quotient fits.
    let nb = value.numer().bits() as i64;
    let db = value.denom().bits() as i64;
    let shift = (nb.max(db) - 1000).max(0) as usize;
    let n = (value.numer() >> shift).to_f64().unwrap_or(0.0);
    let d = (value.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
    n / d
}

pub fn is_positive(value: &Rational) -> bool {
    value.numer().sign() == Sign::Plus
}

pub fn sum<'a, I: IntoIterator<Item = &'a Rational>>(values: I) -> Rational {
    values.into_iter().fold(Rational::zero(), |acc, v| acc + v)
}

pub fn one() -> Rational {
    Rational::one()
}

/// Serde adapter for a single rational stored as `"num/den"`.
pub mod serde_str {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>` stored as a list of `"num/den"` strings.
pub mod serde_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&format_rational(v))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
            .collect()
    }
}
