//! Exact rational numbers and their text forms.
//!
//! Values are parsed from fraction (`"9/10"`) or finite decimal (`"0.95"`)
//! strings and never pass through binary floating point. Decimal rendering
//! rounds half to even at a fixed number of places.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `numer / denom` as an exact rational. Panics if `denom` is zero.
pub fn ratio(numer: u64, denom: u64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(value: u64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"3"`, `"-1.25"`, `".5"` or `"19/20"` into an exact rational.
pub fn parse_exact(text: &str) -> Result<Rational> {
    let s = text.trim();
    let invalid = || Error::InvalidNumber(text.to_string());
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_integer(num.trim()).ok_or_else(invalid)?;
        let den = parse_integer(den.trim()).ok_or_else(invalid)?;
        if den.is_zero() {
            return Err(invalid());
        }
        return Ok(Rational::new(num, den));
    }

    let (negative, body) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(invalid());
    }
    if !whole
        .bytes()
        .chain(frac.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(invalid());
    }
    let digits = format!("{whole}{frac}");
    let mut numer: BigInt = digits.parse().map_err(|_| invalid())?;
    if negative {
        numer = -numer;
    }
    let denom = num_traits::pow(BigInt::from(10u32), frac.len());
    Ok(Rational::new(numer, denom))
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Exact `num/den` form (`"11/210"`, or `"3"` for integers).
pub fn format_fraction(value: &Rational) -> String {
    value.to_string()
}

/// Decimal rendering with `places` digits after the point, rounded half to even.
pub fn format_decimal(value: &Rational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10u32), places);
    let scaled = value.abs() * Rational::from_integer(scale);
    let (mut quotient, remainder) = scaled.numer().div_rem(scaled.denom());
    let twice = remainder * 2u32;
    match twice.cmp(scaled.denom()) {
        std::cmp::Ordering::Greater => quotient += 1u32,
        std::cmp::Ordering::Equal if quotient.is_odd() => quotient += 1u32,
        _ => {}
    }

    let mut digits = quotient.to_str_radix(10);
    if digits.len() <= places {
        digits = format!("{}{}", "0".repeat(places + 1 - digits.len()), digits);
    }
    let split = digits.len() - places;
    let sign = if value.is_negative() && quotient.sign() != Sign::NoSign {
        "-"
    } else {
        ""
    };
    if places == 0 {
        format!("{sign}{digits}")
    } else {
        format!("{sign}{}.{}", &digits[..split], &digits[split..])
    }
}

/// Shortest exact decimal form (`"2.5"`, `"10"`), or `num/den` when the
/// expansion does not terminate.
pub fn format_decimal_trimmed(value: &Rational) -> String {
    let mut den = value.denom().clone();
    let mut places = 0;
    for factor in [2u32, 5] {
        while (&den % factor).is_zero() {
            den /= factor;
        }
    }
    if !num_traits::One::is_one(&den) {
        return format_fraction(value);
    }
    while !(value * Rational::from_integer(num_traits::pow(BigInt::from(10u32), places)))
        .is_integer()
    {
        places += 1;
    }
    format_decimal(value, places)
}

/// Lossy conversion for display-side comparisons only.
pub fn to_f64(value: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or(f64::NAN)
}
