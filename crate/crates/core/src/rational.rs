//! Parsing and formatting helpers for exact rationals.

use num::bigint::BigInt;
use num::{BigRational, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Parse "p/q" or a plain integer. Decimal strings are rejected here;
/// the CLI converts them explicitly so no silent rounding happens.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    s.parse::<BigRational>()
        .map_err(|e| Error::Parse(format!("{s:?} is not a rational (want p/q): {e}")))
}

/// Exact value of a decimal string like "-1.25".
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (int_part, frac_part) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    let digits: String = format!("{int_part}{frac_part}");
    let n = digits
        .parse::<BigInt>()
        .map_err(|e| Error::Parse(format!("{s:?} is not a decimal: {e}")))?;
    let d = num::pow::pow(BigInt::from(10), frac_part.len());
    Ok(BigRational::new(n, d))
}

/// Fixed-point decimal rendering with `digits` places, round to nearest.
pub fn to_decimal_string(r: &BigRational, digits: usize) -> String {
    let neg = r.is_negative();
    let a = r.abs();
    let scale = num::pow::pow(BigInt::from(10), digits);
    let scaled = (&a * BigRational::from_integer(scale.clone())
        + BigRational::new(BigInt::from(1), BigInt::from(2)))
    .floor()
    .to_integer();
    let (int, frac) = num::Integer::div_rem(&scaled, &scale);
    let sign = if neg && !scaled.is_zero() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac:0>width$}", width = digits)
    }
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational value of a finite f64.
pub fn from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}
