use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{Field, ParamPoly, Rational, ScalarError};

/// Element of the fraction field of [`ParamPoly`].
///
/// Canonical form: `gcd(num, den) = 1` and `den` monic (so its leading
/// coefficient is positive). Zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ParamRat {
    num: ParamPoly,
    den: ParamPoly,
}

impl ParamRat {
    pub fn new(num: ParamPoly, den: ParamPoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g)?;
        let den = den.div_exact(&g)?;
        let l = Rational::one() / den.lead();
        Ok(ParamRat {
            num: num.scale(&l),
            den: den.scale(&l),
        })
    }

    pub fn num(&self) -> &ParamPoly {
        &self.num
    }

    pub fn den(&self) -> &ParamPoly {
        &self.den
    }

    pub fn eval(&self, at: &Rational) -> Result<Rational, ScalarError> {
        let d = self.den.eval(at);
        if d.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(self.num.eval(at) / d)
    }

    pub fn as_poly(&self) -> Option<&ParamPoly> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        Self::new(self.den.clone(), self.num.clone())
    }
}

impl From<ParamPoly> for ParamRat {
    fn from(p: ParamPoly) -> Self {
        ParamRat {
            num: p,
            den: ParamPoly::one(),
        }
    }
}

impl From<Rational> for ParamRat {
    fn from(r: Rational) -> Self {
        ParamPoly::constant(r).into()
    }
}

impl fmt::Display for ParamRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            let wrap = |p: &ParamPoly| {
                if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                    format!("({p})")
                } else {
                    p.to_string()
                }
            };
            write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

impl fmt::Debug for ParamRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParamRat({self})")
    }
}

impl Zero for ParamRat {
    fn zero() -> Self {
        ParamPoly::zero().into()
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for ParamRat {
    fn one() -> Self {
        ParamPoly::one().into()
    }
}

impl Add for ParamRat {
    type Output = ParamRat;

    fn add(self, rhs: ParamRat) -> ParamRat {
        if self.den == rhs.den {
            return ParamRat::new(&self.num + &rhs.num, self.den).expect("nonzero den");
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        ParamRat::new(num, &self.den * &rhs.den).expect("nonzero den")
    }
}

impl Sub for ParamRat {
    type Output = ParamRat;

    fn sub(self, rhs: ParamRat) -> ParamRat {
        self + (-rhs)
    }
}

impl Mul for ParamRat {
    type Output = ParamRat;

    fn mul(self, rhs: ParamRat) -> ParamRat {
        if self.is_zero() || rhs.is_zero() {
            return ParamRat::zero();
        }
        ParamRat::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero den")
    }
}

impl Div for ParamRat {
    type Output = ParamRat;

    /// Panics on division by zero, like the primitive numeric types.
    fn div(self, rhs: ParamRat) -> ParamRat {
        assert!(!rhs.is_zero(), "ParamRat division by zero");
        ParamRat::new(&self.num * &rhs.den, &self.den * &rhs.num).expect("nonzero den")
    }
}

impl Neg for ParamRat {
    type Output = ParamRat;

    fn neg(self) -> ParamRat {
        ParamRat {
            num: -self.num,
            den: self.den,
        }
    }
}

impl Field for ParamRat {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;

    fn p(c: &[i64]) -> ParamPoly {
        ParamPoly::from_coeffs(c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn canonical_form() {
        // (a^2 - 1) / (2a - 2) = (a + 1)/2
        let r = ParamRat::new(p(&[-1, 0, 1]), p(&[-2, 2])).unwrap();
        assert_eq!(r.den(), &p(&[1]));
        assert_eq!(r.num(), &ParamPoly::from_coeffs(vec![crate::scalars::rat(1, 2); 2]));
        let neg = ParamRat::new(p(&[1]), p(&[0, -3])).unwrap();
        assert!(neg.den().lead() > Rational::zero());
        assert!(ParamRat::new(p(&[1]), ParamPoly::zero()).is_err());
    }

    #[test]
    fn field_ops() {
        let a = ParamRat::new(p(&[1]), p(&[0, 1])).unwrap(); // 1/a
        let b: ParamRat = p(&[0, 1]).into(); // a
        assert_eq!(a.clone() * b.clone(), ParamRat::one());
        assert_eq!(b.clone() / b.clone(), ParamRat::one());
        assert_eq!((a.clone() + a.clone()) - a.clone(), a);
        assert_eq!(a.eval(&int(4)).unwrap(), crate::scalars::rat(1, 4));
        assert!(a.eval(&int(0)).is_err());
    }
}
