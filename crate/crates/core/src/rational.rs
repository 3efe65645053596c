//! Exact rational numbers.
//!
//! Every probability, weight and value in the crate is a [`Rational`]. The
//! type is `num-rational`'s big rational, which is always kept in lowest
//! terms with a positive denominator.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::ParseRationalError;

pub type Rational = num_rational::BigRational;

/// Shorthand for `numer/denom`. Panics on a zero denominator.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"k"` or `"p/q"` (optional leading `-`). Decimals, whitespace and
/// zero denominators are rejected.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let parse_int = |s: &str, allow_sign: bool| -> Result<BigInt, ParseRationalError> {
        let digits = if allow_sign { s.strip_prefix('-').unwrap_or(s) } else { s };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        s.parse::<BigInt>().map_err(|_| err())
    };
    let numer = parse_int(num, true)?;
    let denom = match den {
        Some(d) => parse_int(d, false)?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(numer, denom))
}

/// Formats as `"k"` for integers and `"p/q"` otherwise.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

/// `base^exp` for a non-negative exponent.
pub fn pow(base: &Rational, exp: usize) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

pub fn abs(value: &Rational) -> Rational {
    value.abs()
}

/// Lossy conversion used only by the sampling oracle.
pub fn to_f64(value: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or(f64::NAN)
}
