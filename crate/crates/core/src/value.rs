//! Exact extended rationals.
//!
//! Every distance, weight and partial-metric entry in this crate is an exact
//! rational, optionally extended by a single positive infinity. Axiom checks
//! are equalities and strict inequalities, so floating point is never used on
//! the verification path.
//!
//! # Text grammar
//!
//! ```text
//! value    := "inf" | rational
//! rational := ["-"] digits [ "/" digits ]
//! ```
//!
//! A fraction must be written in lowest terms with a positive denominator
//! (`"3/4"`, `"-1/2"`; `"2/4"` and `"1/0"` are rejected). Integers may also be
//! written without a denominator.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational.
pub type Rational = num_rational::BigRational;

/// Builds `num/den` as a reduced rational. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as a rational.
pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// A rational extended by `+∞`.
///
/// `Finite(r) < Infinity` for every `r`, and `Infinity` absorbs addition.
/// Distances of a quasi-metric use the non-negative part; partial metrics may
/// carry negative finite entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DistVal {
    Finite(Rational),
    Infinity,
}

impl DistVal {
    pub fn zero() -> Self {
        DistVal::Finite(Rational::zero())
    }

    pub fn from_int(v: i64) -> Self {
        DistVal::Finite(int(v))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        DistVal::Finite(rat(num, den))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, DistVal::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, DistVal::Infinity)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, DistVal::Finite(r) if r.is_zero())
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, DistVal::Finite(r) if r.is_negative())
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            DistVal::Finite(r) => Some(r),
            DistVal::Infinity => None,
        }
    }

    /// Adds a finite rational; infinity stays infinity.
    pub fn shift(&self, by: &Rational) -> DistVal {
        match self {
            DistVal::Finite(r) => DistVal::Finite(r + by),
            DistVal::Infinity => DistVal::Infinity,
        }
    }

    pub fn max(self, other: DistVal) -> DistVal {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl From<Rational> for DistVal {
    fn from(r: Rational) -> Self {
        DistVal::Finite(r)
    }
}

impl PartialOrd for DistVal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DistVal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (DistVal::Finite(a), DistVal::Finite(b)) => a.cmp(b),
            (DistVal::Finite(_), DistVal::Infinity) => Ordering::Less,
            (DistVal::Infinity, DistVal::Finite(_)) => Ordering::Greater,
            (DistVal::Infinity, DistVal::Infinity) => Ordering::Equal,
        }
    }
}

impl Add for &DistVal {
    type Output = DistVal;
    fn add(self, rhs: &DistVal) -> DistVal {
        match (self, rhs) {
            (DistVal::Finite(a), DistVal::Finite(b)) => DistVal::Finite(a + b),
            _ => DistVal::Infinity,
        }
    }
}

impl Add for DistVal {
    type Output = DistVal;
    fn add(self, rhs: DistVal) -> DistVal {
        &self + &rhs
    }
}

/// `∞ − r = ∞`; subtracting from a finite value requires a finite subtrahend.
impl Sub<&Rational> for &DistVal {
    type Output = DistVal;
    fn sub(self, rhs: &Rational) -> DistVal {
        match self {
            DistVal::Finite(a) => DistVal::Finite(a - rhs),
            DistVal::Infinity => DistVal::Infinity,
        }
    }
}

impl Neg for &DistVal {
    type Output = Option<DistVal>;
    fn neg(self) -> Option<DistVal> {
        self.finite().map(|r| DistVal::Finite(-r))
    }
}

impl fmt::Display for DistVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistVal::Finite(r) => write!(f, "{}", format_rational(r)),
            DistVal::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValueParseError {
    #[error("empty value")]
    Empty,
    #[error("malformed number `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("`{0}` is not in lowest terms")]
    NotReduced(String),
}

/// Parses the rational part of the grammar.
pub fn parse_rational(s: &str) -> Result<Rational, ValueParseError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ValueParseError::Empty);
    }
    let (num_s, den_s) = match s.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (s, None),
    };
    let num = parse_integer(num_s, true).ok_or_else(|| ValueParseError::Malformed(s.into()))?;
    match den_s {
        None => Ok(Rational::from_integer(num)),
        Some(d) => {
            let den = parse_integer(d, false).ok_or_else(|| ValueParseError::Malformed(s.into()))?;
            if den.is_zero() {
                return Err(ValueParseError::ZeroDenominator(s.into()));
            }
            if !num.gcd(&den).is_one() {
                return Err(ValueParseError::NotReduced(s.into()));
            }
            Ok(Rational::new_raw(num, den))
        }
    }
}

fn parse_integer(s: &str, allow_sign: bool) -> Option<BigInt> {
    let digits = match s.strip_prefix('-') {
        Some(rest) if allow_sign => rest,
        Some(_) => return None,
        None => s,
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s).ok()
}

impl FromStr for DistVal {
    type Err = ValueParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim() == "inf" {
            Ok(DistVal::Infinity)
        } else {
            parse_rational(s).map(DistVal::Finite)
        }
    }
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
