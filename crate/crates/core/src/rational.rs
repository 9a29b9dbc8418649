//! Rational-number text format and conversions to and from floating point.
//!
//! Rationals are written as `numerator/denominator` in lowest terms, with the
//! denominator omitted when it is 1. Parsing additionally accepts decimal
//! literals (`1.25` reads as `5/4`), which are converted exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use twofloat::TwoFloat;

/// Parses `a`, `a/b`, `-a/b` or a decimal literal such as `-0.125`.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((num, den)) = text.split_once('/') {
        let num = parse_integer(num.trim())?;
        let den = parse_integer(den.trim())?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    parse_decimal(text)
}

fn parse_integer(text: &str) -> Option<BigInt> {
    let digits = text.strip_prefix(['+', '-']).unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.strip_prefix('+').unwrap_or(text).parse().ok()
}

fn parse_decimal(text: &str) -> Option<BigRational> {
    let (negative, body) = match text.as_bytes()[0] {
        b'-' => (true, &text[1..]),
        b'+' => (false, &text[1..]),
        _ => (false, text),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().ok()?
    };
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let value = BigRational::new(numer, denom);
    Some(if negative { -value } else { value })
}

/// Canonical text: `n` for integers, `n/d` otherwise.
pub fn format_rational(value: &BigRational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn to_f64(value: &BigRational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        if value.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact rational value of a finite double.
pub fn from_f64(value: f64) -> Option<BigRational> {
    BigRational::from_float(value)
}

/// Rounds to a double-double: `hi` is the nearest double, `lo` the nearest
/// double to the remainder.
pub fn to_twofloat(value: &BigRational) -> TwoFloat {
    let hi = to_f64(value);
    if !hi.is_finite() {
        return TwoFloat::from(hi);
    }
    let rest = value - from_f64(hi).expect("finite double");
    TwoFloat::new_add(hi, to_f64(&rest))
}

pub fn integer(value: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(value))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/6"), Some(BigRational::new(1.into(), 2.into())));
        assert_eq!(parse_rational("-1/3"), Some(BigRational::new((-1).into(), 3.into())));
        assert_eq!(parse_rational("+7"), Some(integer(7)));
        assert_eq!(parse_rational("1.25"), Some(BigRational::new(5.into(), 4.into())));
        assert_eq!(parse_rational("-.5"), Some(BigRational::new((-1).into(), 2.into())));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("1e3"), None);
        assert_eq!(parse_rational("."), None);
        assert_eq!(parse_rational("--1"), None);
    }

    #[test]
    fn formats_without_unit_denominator() {
        assert_eq!(format_rational(&integer(-4)), "-4");
        assert_eq!(format_rational(&BigRational::new(6.into(), (-4).into())), "-3/2");
    }

    #[test]
    fn twofloat_carries_the_tail() {
        let third = BigRational::new(1.into(), 3.into());
        let tf = to_twofloat(&third);
        let back = from_f64(tf.hi()).unwrap() + from_f64(tf.lo()).unwrap();
        let err = to_f64(&(back - &third)).abs();
        assert!(err < 1e-32, "error {err}");
    }
}
