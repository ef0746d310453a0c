//! Scalar field abstraction.
//!
//! Every linear-algebra routine in this crate is written against [`Field`].
//! The algorithms compare entries against zero exactly, so instantiate them
//! only with exact types: [`Rational`] (arbitrary precision, the default
//! everywhere) or a fixed-width `Ratio<i64>` / `Ratio<i128>` when inputs are
//! known to stay small.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational numbers.
pub type Rational = BigRational;

pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + FromPrimitive
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_int(value: i64) -> Self {
        Self::from_i64(value).expect("every field contains the integers")
    }
}

impl<T> Field for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + Zero
        + One
        + FromPrimitive
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
        + Neg<Output = T>
        + Send
        + Sync
{
}

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"p"` or `"p/q"` (optional sign on `p`, `q > 0` after normalisation).
pub fn parse_ratio<I>(text: &str) -> Result<Ratio<I>>
where
    I: Clone + Integer + Signed + std::str::FromStr,
{
    let bad = || Error::ParseRational(text.to_string());
    let t = text.trim();
    let parse_int = |s: &str| -> Result<I> {
        let s = s.trim();
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        s.parse::<I>().map_err(|_| bad())
    };
    match t.split_once('/') {
        None => Ok(Ratio::from_integer(parse_int(t)?)),
        Some((p, q)) => {
            let q = parse_int(q)?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Ratio::new(parse_int(p)?, q))
        }
    }
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    parse_ratio::<BigInt>(text)
}

/// `"p"` when the denominator is one, `"p/q"` otherwise.
pub fn format_rational<I>(value: &Ratio<I>) -> String
where
    I: Clone + Integer + fmt::Display,
{
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Scales a rational vector to a primitive integer vector pointing the same way.
pub fn primitive_integer_vector(values: &[Rational]) -> Vec<BigInt> {
    let lcm = common_denominator(values);
    let ints: Vec<BigInt> = values
        .iter()
        .map(|v| v.numer() * (&lcm / v.denom()))
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() {
        ints
    } else {
        ints.into_iter().map(|v| v / &g).collect()
    }
}
