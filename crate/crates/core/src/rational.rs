//! Exact rational scalars and their text form.
//!
//! Values are written as `"p/q"` or as integers (`"3"`); decimal input
//! (`"1.25"`) is accepted and converted to an exact fraction.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse(text: &str) -> Result<Rational> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| Error::Parse(format!("bad numerator in {t:?}")))?;
        let d: BigInt = d.trim().parse().map_err(|_| Error::Parse(format!("bad denominator in {t:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {t:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(Error::Parse(format!("bad number {t:?}")));
    }
    if !whole.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(Error::Parse(format!("bad number {t:?}")));
    }
    let digits = format!("{}{}", if whole.is_empty() { "0" } else { whole }, frac);
    let numer: BigInt = digits.parse().map_err(|_| Error::Parse(format!("bad number {t:?}")))?;
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    let value = Rational::new(numer, denom);
    Ok(if neg { -value } else { value })
}

/// Canonical text: integers print bare, everything else as `p/q`.
pub fn format(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Decimal rendering for charts. Exact when the denominator has only factors 2 and 5,
/// otherwise rounded to `max_digits` fractional digits.
pub fn to_decimal(value: &Rational, max_digits: usize) -> String {
    if value.is_integer() {
        return value.numer().to_string();
    }
    let neg = value.is_negative();
    let abs = value.abs();
    let whole = abs.trunc();
    let mut rem = abs - &whole;
    let ten = int(10);
    let mut out = String::new();
    for _ in 0..max_digits {
        if rem.is_zero() {
            break;
        }
        rem *= &ten;
        let digit = rem.trunc();
        out.push_str(&digit.numer().to_string());
        rem -= digit;
    }
    let sign = if neg { "-" } else { "" };
    if out.is_empty() {
        format!("{sign}{}", whole.numer())
    } else {
        format!("{sign}{}.{}", whole.numer(), out)
    }
}

pub fn to_f64(value: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn one() -> Rational {
    Rational::one()
}

pub(crate) fn zero() -> Rational {
    Rational::zero()
}
