//! Exact rational scalars.
//!
//! Every number in the exact core is a [`Rational`]: an arbitrary-precision
//! fraction kept in lowest terms with a positive denominator. The textual
//! encoding is `"p/q"` or `"p"`, always re-emitted in lowest terms.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

/// Integer-valued rational.
pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `numer / denom`, reduced.
///
/// Panics if `denom` is zero.
pub fn frac(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `"p/q"` or `"p"` with integer `p` and positive integer `q`.
pub fn parse_rational(input: &str) -> Result<Rational> {
    let bad = |reason: &str| Error::InvalidRational {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    let s = input.trim();
    if s.is_empty() {
        return Err(bad("empty string"));
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let parse_int = |t: &str, what: &str| -> Result<BigInt> {
        let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad(&format!("{what} must be an integer (only p/q or p is accepted)")));
        }
        t.parse::<BigInt>().map_err(|e| bad(&e.to_string()))
    };
    let numer = parse_int(num, "numerator")?;
    let denom = match den {
        None => BigInt::one(),
        Some(d) => {
            if d.starts_with(['-', '+']) {
                return Err(bad("denominator must be a positive integer"));
            }
            parse_int(d, "denominator")?
        }
    };
    if denom.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rational::new(numer, denom))
}

/// Canonical text: lowest terms, `"p"` when the denominator is one.
pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}

/// True iff `x` is an integer multiple of `mesh` (`mesh > 0`).
pub fn is_multiple_of(x: &Rational, mesh: &Rational) -> bool {
    (x / mesh).is_integer()
}

pub fn pow(base: &Rational, exp: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Lossy conversion used only for rendering and distance reporting.
pub fn to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or_else(|| {
        // Extremely large magnitudes: fall back to the sign.
        if x.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

pub fn min_of<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Option<Rational> {
    values.into_iter().min().cloned()
}

pub fn sum(values: &[Rational]) -> Rational {
    values.iter().fold(Rational::zero(), |acc, v| acc + v)
}

/// Floor of a rational as a rational.
pub fn floor(x: &Rational) -> Rational {
    Rational::from_integer(x.numer().div_floor(x.denom()))
}

pub(crate) fn vec_to_strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

pub(crate) fn display_vec(v: &[Rational]) -> String {
    format!("({})", vec_to_strings(v).join(", "))
}
