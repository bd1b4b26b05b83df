use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{parse_rational, Coeff, ParamRat, Rational, ScalarError};

/// Dense univariate polynomial over the rationals, in the parameter `a`.
///
/// Coefficients are stored low to high; the highest stored coefficient is
/// never zero, so the zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ParamPoly {
    coeffs: Vec<Rational>,
}

impl ParamPoly {
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        ParamPoly { coeffs }
    }

    pub fn constant(r: Rational) -> Self {
        Self::from_coeffs(vec![r])
    }

    /// The parameter `a` itself.
    pub fn alpha() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn monomial(c: Rational, deg: usize) -> Self {
        let mut v = vec![Rational::zero(); deg + 1];
        v[deg] = c;
        Self::from_coeffs(v)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, at: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * at + c)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * r).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Euclidean division over the rationals.
    pub fn div_rem(&self, rhs: &Self) -> Result<(Self, Self), ScalarError> {
        let Some(dr) = rhs.degree() else {
            return Err(ScalarError::DivisionByZero);
        };
        let lead = rhs.lead();
        let mut rem = self.coeffs.clone();
        let Some(dn) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if dn < dr {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); dn - dr + 1];
        for k in (0..=dn - dr).rev() {
            let q = &rem[k + dr] / &lead;
            if q.is_zero() {
                continue;
            }
            for (i, c) in rhs.coeffs.iter().enumerate() {
                rem[k + i] -= &q * c;
            }
            quot[k] = q;
        }
        Ok((Self::from_coeffs(quot), Self::from_coeffs(rem)))
    }

    pub fn div_exact(&self, rhs: &Self) -> Result<Self, ScalarError> {
        let (q, r) = self.div_rem(rhs)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(ScalarError::InexactDivision)
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).expect("nonzero divisor").1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let l = self.lead();
        self.scale(&(Rational::one() / l))
    }

    /// Least common denominator of the coefficients.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, ScalarError> {
        serde_json::from_value(v.clone()).map_err(|e| ScalarError::BadJson(e.to_string()))
    }

    fn fmt_term(c: &Rational, deg: usize) -> String {
        let mag = c.abs();
        let var = match deg {
            0 => return mag.to_string(),
            1 => "a".to_string(),
            d => format!("a^{d}"),
        };
        if mag.is_one() {
            var
        } else {
            format!("{mag}*{var}")
        }
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let t = Self::fmt_term(c, deg);
            match (first, c.is_negative()) {
                (true, true) => write!(f, "-{t}")?,
                (true, false) => write!(f, "{t}")?,
                (false, true) => write!(f, " - {t}")?,
                (false, false) => write!(f, " + {t}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParamPoly({self})")
    }
}

impl Serialize for ParamPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&[c.numer().to_string(), c.denom().to_string()])?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for ParamPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs: Vec<[String; 2]> = Vec::deserialize(d)?;
        let coeffs = pairs
            .iter()
            .map(|[n, den]| parse_rational(&format!("{n}/{den}")))
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        Ok(ParamPoly::from_coeffs(coeffs))
    }
}

impl Zero for ParamPoly {
    fn zero() -> Self {
        ParamPoly { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for ParamPoly {
    fn one() -> Self {
        Self::constant(Rational::one())
    }
}

impl Add<&ParamPoly> for &ParamPoly {
    type Output = ParamPoly;

    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ParamPoly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub<&ParamPoly> for &ParamPoly {
    type Output = ParamPoly;

    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ParamPoly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul<&ParamPoly> for &ParamPoly {
    type Output = ParamPoly;

    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        if self.is_zero() || rhs.is_zero() {
            return ParamPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ParamPoly::from_coeffs(out)
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;

    fn neg(self) -> ParamPoly {
        ParamPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! by_value {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for ParamPoly {
            type Output = ParamPoly;
            fn $m(self, rhs: ParamPoly) -> ParamPoly {
                (&self).$m(&rhs)
            }
        }
    )*};
}
by_value!(Add add, Sub sub, Mul mul);

impl Neg for ParamPoly {
    type Output = ParamPoly;

    fn neg(self) -> ParamPoly {
        -&self
    }
}

impl Coeff for ParamPoly {
    type Frac = ParamRat;

    fn from_rational(r: Rational) -> Self {
        Self::constant(r)
    }

    fn as_rational(&self) -> Option<Rational> {
        self.is_constant().then(|| self.coeff(0))
    }

    fn try_div(&self, rhs: &Self) -> Option<Self> {
        self.div_exact(rhs).ok()
    }

    fn components(&self) -> Vec<Rational> {
        self.coeffs.clone()
    }

    fn clear_denominators(v: &[ParamRat]) -> Vec<Self> {
        let mut l = ParamPoly::one();
        for x in v {
            let d = x.den();
            l = (&l * d).div_exact(&l.gcd(d)).expect("gcd divides");
        }
        let polys: Vec<ParamPoly> = v
            .iter()
            .map(|x| (x.num() * &l).div_exact(x.den()).expect("lcm multiple"))
            .collect();
        let den = polys
            .iter()
            .fold(BigInt::one(), |acc, p| acc.lcm(&p.denominator_lcm()));
        let s = Rational::from_integer(den);
        polys.iter().map(|p| p.scale(&s)).collect()
    }

    fn specialize(&self, alpha: &Rational) -> Rational {
        self.eval(alpha)
    }

    fn term_text(&self) -> (bool, String, bool) {
        match self.coeffs.iter().filter(|c| !c.is_zero()).count() {
            0 => (false, "0".into(), false),
            1 => {
                let deg = self.degree().expect("nonzero");
                let c = self.lead();
                (c.is_negative(), Self::fmt_term(&c, deg), false)
            }
            _ if self.lead().is_negative() => (true, format!("({})", -self), true),
            _ => (false, format!("({self})"), true),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        ParamPoly::to_json(self)
    }
}
