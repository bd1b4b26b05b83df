//! Exact coefficient arithmetic.
//!
//! Everything in this crate is generic over a [`Coeff`] ring. Two
//! instantiations are provided: plain rationals ([`Rational`]) and
//! polynomials in the central parameter `a` ([`ParamPoly`]). Linear solving
//! happens over the matching fraction field ([`Coeff::Frac`]).

mod linalg;
mod param_poly;
mod param_rat;
mod roots;

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use linalg::{nullspace, rank, rref};
pub use param_poly::ParamPoly;
pub use param_rat::ParamRat;
pub use roots::rational_roots;

/// Arbitrary precision rational, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("inexact division")]
    InexactDivision,
    #[error("cannot parse rational `{0}`")]
    BadRational(String),
    #[error("malformed coefficient json: {0}")]
    BadJson(String),
}

impl ScalarError {
    pub fn name(&self) -> &'static str {
        match self {
            ScalarError::DivisionByZero => "DivisionByZero",
            ScalarError::InexactDivision => "InexactDivision",
            ScalarError::BadRational(_) => "BadRational",
            ScalarError::BadJson(_) => "BadJson",
        }
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p`, `-p`, `p/q`; whitespace around the pieces is ignored.
pub fn parse_rational(s: &str) -> Result<Rational, ScalarError> {
    let bad = || ScalarError::BadRational(s.to_string());
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Fields used by exact linear algebra.
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
}

impl Field for Rational {}

/// Coefficient rings for operators.
///
/// Elements are central scalars: commutative, and commuting with `x` and `D`.
pub trait Coeff:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Fraction field, used by nullspace computations.
    type Frac: Field + From<Self>;

    fn from_rational(r: Rational) -> Self;

    fn from_integer(n: BigInt) -> Self {
        Self::from_rational(Rational::from_integer(n))
    }

    fn from_i64(n: i64) -> Self {
        Self::from_integer(BigInt::from(n))
    }

    /// `Some` when the element is a rational constant.
    fn as_rational(&self) -> Option<Rational>;

    /// Exact quotient, `None` when `rhs` does not divide `self` (or is zero).
    fn try_div(&self, rhs: &Self) -> Option<Self>;

    /// Coordinates over the rationals in a fixed basis.
    fn components(&self) -> Vec<Rational>;

    /// Scales a vector over the fraction field to a primitive-ish vector over `Self`
    /// spanning the same line.
    fn clear_denominators(v: &[Self::Frac]) -> Vec<Self>;

    /// Value at a rational value of the parameter.
    fn specialize(&self, alpha: &Rational) -> Rational;

    /// `(negative, magnitude, compound)`: sign and absolute text of the element
    /// for term rendering; `compound` when the magnitude is a parenthesized sum.
    fn term_text(&self) -> (bool, String, bool);

    fn to_json(&self) -> serde_json::Value;

    fn scale(&self, r: &Rational) -> Self {
        self.clone() * Self::from_rational(r.clone())
    }

    fn is_unit(&self) -> bool {
        self.try_div(self).is_some() && Self::one().try_div(self).is_some()
    }
}

pub(crate) fn rational_term_text(r: &Rational) -> (bool, String, bool) {
    (r.is_negative(), r.abs().to_string(), false)
}

impl Coeff for Rational {
    type Frac = Rational;

    fn from_rational(r: Rational) -> Self {
        r
    }

    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn try_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            None
        } else {
            Some(self / rhs)
        }
    }

    fn components(&self) -> Vec<Rational> {
        vec![self.clone()]
    }

    fn clear_denominators(v: &[Rational]) -> Vec<Rational> {
        let l = v
            .iter()
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        v.iter().map(|r| r * Rational::from_integer(l.clone())).collect()
    }

    fn specialize(&self, _alpha: &Rational) -> Rational {
        self.clone()
    }

    fn term_text(&self) -> (bool, String, bool) {
        rational_term_text(self)
    }

    fn to_json(&self) -> serde_json::Value {
        ParamPoly::constant(self.clone()).to_json()
    }
}

/// Generalized binomial `n choose k` for any integer `n`.
pub fn binomial(n: i64, k: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for t in 0..k as i64 {
        num *= BigInt::from(n - t);
        den *= BigInt::from(t + 1);
    }
    num / den
}
