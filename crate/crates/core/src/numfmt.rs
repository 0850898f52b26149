//! Exact decimal formatting and parsing of rationals.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub const SIGNIFICANT_DIGITS: u32 = 12;

fn pow10(e: u32) -> BigInt {
    BigInt::from(10u32).pow(e)
}

/// `x · 10^e` for a possibly negative `e`.
fn shift(x: &BigRational, e: i64) -> BigRational {
    let p = BigRational::from_integer(pow10(e.unsigned_abs() as u32));
    if e >= 0 {
        x * p
    } else {
        x / p
    }
}

fn round_half_even(x: &BigRational) -> BigInt {
    let floor = x.floor();
    let frac = x - &floor;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let base = floor.to_integer();
    if frac > half || (frac == half && base.is_odd()) {
        base + 1
    } else {
        base
    }
}

/// Fixed-point decimal with 12 significant digits, rounded half to even.
///
/// ```
/// use num_rational::BigRational;
/// use symtest::numfmt::format_rational;
/// assert_eq!(format_rational(&BigRational::new(1.into(), 20.into())), "0.0500000000000");
/// assert_eq!(format_rational(&BigRational::new(1.into(), 1.into())), "1.00000000000");
/// ```
pub fn format_rational(x: &BigRational) -> String {
    let digits = SIGNIFICANT_DIGITS as i64;
    if x.is_zero() {
        return format!("0.{}", "0".repeat(digits as usize - 1));
    }
    let sign = if x.is_negative() { "-" } else { "" };
    let a = x.abs();
    let mut e = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    while shift(&BigRational::one(), e) > a {
        e -= 1;
    }
    while shift(&BigRational::one(), e + 1) <= a {
        e += 1;
    }
    let mut mantissa = round_half_even(&shift(&a, digits - 1 - e));
    if mantissa == pow10(digits as u32) {
        mantissa = pow10(digits as u32 - 1);
        e += 1;
    }
    let s = mantissa.to_string();
    let body = if e >= digits - 1 {
        format!("{s}{}", "0".repeat((e - (digits - 1)) as usize))
    } else if e >= 0 {
        let (int, frac) = s.split_at(e as usize + 1);
        format!("{int}.{frac}")
    } else {
        format!("0.{}{s}", "0".repeat((-e - 1) as usize))
    };
    format!("{sign}{body}")
}

/// [`format_rational`] applied to the exact binary value of `x`.
pub fn format_f64(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format_rational(&BigRational::from_float(x).expect("finite"))
}

/// Parses `p/q`, integers, and decimals with an optional exponent.
pub fn parse_rational(input: &str) -> Result<BigRational> {
    let bad = || Error::InvalidArgument(format!("'{input}' is not a number"));
    let s = input.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::InvalidArgument(format!("'{input}' has a zero denominator")));
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    if exponent.unsigned_abs() > 4096 {
        return Err(bad());
    }
    let digits: BigInt = format!("0{int}{frac}").parse().map_err(|_| bad())?;
    let value = shift(&BigRational::from_integer(digits), exponent - frac.len() as i64);
    Ok(if negative { -value } else { value })
}

/// Sign of a rational as -1, 0 or 1.
pub fn sign(x: &BigRational) -> i8 {
    match x.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}
