use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{join_terms, power};
use crate::scalars::Coeff;

/// Commutative polynomial in two variables, keyed by `(x_exp, y_exp)`.
///
/// Used both for the homogeneous parts of operators (variables `x`, `y`) and
/// for relations `f(X, Y)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BiPoly<C: Coeff> {
    terms: BTreeMap<(u32, u32), C>,
}

impl<C: Coeff> Default for BiPoly<C> {
    fn default() -> Self {
        BiPoly {
            terms: BTreeMap::new(),
        }
    }
}

impl<C: Coeff> BiPoly<C> {
    pub fn from_terms(terms: impl IntoIterator<Item = (u32, u32, C)>) -> Self {
        let mut p = Self::default();
        for (i, j, c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    pub fn x() -> Self {
        Self::from_terms([(1, 0, C::one())])
    }

    pub fn y() -> Self {
        Self::from_terms([(0, 1, C::one())])
    }

    fn add_term(&mut self, i: u32, j: u32, c: C) {
        if c.is_zero() {
            return;
        }
        let s = match self.terms.remove(&(i, j)) {
            Some(old) => old + c,
            None => c,
        };
        if !s.is_zero() {
            self.terms.insert((i, j), s);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &C)> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> C {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(C::zero)
    }

    /// Maximum exponents of the two variables.
    pub fn degrees(&self) -> (u32, u32) {
        self.terms
            .keys()
            .fold((0, 0), |(a, b), &(i, j)| (a.max(i), b.max(j)))
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(self.terms.iter().map(|(&(i, j), a)| (i, j, a.clone() * c.clone())))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn dx(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(&(i, _), _)| i > 0)
                .map(|(&(i, j), c)| (i - 1, j, c.clone() * C::from_i64(i as i64))),
        )
    }

    pub fn dy(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(&(_, j), _)| j > 0)
                .map(|(&(i, j), c)| (i, j - 1, c.clone() * C::from_i64(j as i64))),
        )
    }

    /// `Some(((i, j), c))` when the polynomial is a single term.
    pub fn as_monomial(&self) -> Option<((u32, u32), C)> {
        match self.terms.len() {
            1 => self.terms.iter().next().map(|(k, c)| (*k, c.clone())),
            _ => None,
        }
    }

    /// Exact quotient by a single term; `None` if some term is not divisible.
    pub fn div_monomial(&self, (a, b): (u32, u32), c: &C) -> Option<Self> {
        let mut out = Self::default();
        for (&(i, j), v) in &self.terms {
            if i < a || j < b {
                return None;
            }
            out.add_term(i - a, j - b, v.try_div(c)?);
        }
        Some(out)
    }

    /// Renders with the given variable names, by descending second exponent
    /// then descending first exponent.
    pub fn render(&self, vx: &str, vy: &str) -> String {
        let mut keys: Vec<&(u32, u32)> = self.terms.keys().collect();
        keys.sort_by(|a, b| (b.1, b.0).cmp(&(a.1, a.0)));
        join_terms(keys.into_iter().map(|k| {
            let mono: Vec<String> = [power(vx, k.0), power(vy, k.1)]
                .into_iter()
                .flatten()
                .collect();
            (&self.terms[k], mono.join("*"))
        }))
    }
}

impl<C: Coeff> fmt::Display for BiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x", "y"))
    }
}

impl<C: Coeff> Zero for BiPoly<C> {
    fn zero() -> Self {
        Self::default()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Coeff> One for BiPoly<C> {
    fn one() -> Self {
        Self::from_terms([(0, 0, C::one())])
    }
}

impl<C: Coeff> Add<&BiPoly<C>> for &BiPoly<C> {
    type Output = BiPoly<C>;

    fn add(self, rhs: &BiPoly<C>) -> BiPoly<C> {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }
}

impl<C: Coeff> Sub<&BiPoly<C>> for &BiPoly<C> {
    type Output = BiPoly<C>;

    fn sub(self, rhs: &BiPoly<C>) -> BiPoly<C> {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, -c.clone());
        }
        out
    }
}

impl<C: Coeff> Mul<&BiPoly<C>> for &BiPoly<C> {
    type Output = BiPoly<C>;

    fn mul(self, rhs: &BiPoly<C>) -> BiPoly<C> {
        let mut out = BiPoly::default();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &rhs.terms {
                out.add_term(i + k, j + l, a.clone() * b.clone());
            }
        }
        out
    }
}

impl<C: Coeff> Neg for &BiPoly<C> {
    type Output = BiPoly<C>;

    fn neg(self) -> BiPoly<C> {
        BiPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect(),
        }
    }
}

macro_rules! by_value {
    ($($tr:ident $m:ident),*) => {$(
        impl<C: Coeff> $tr for BiPoly<C> {
            type Output = BiPoly<C>;
            fn $m(self, rhs: BiPoly<C>) -> BiPoly<C> {
                (&self).$m(&rhs)
            }
        }
    )*};
}
by_value!(Add add, Sub sub, Mul mul);

impl<C: Coeff> Neg for BiPoly<C> {
    type Output = BiPoly<C>;

    fn neg(self) -> BiPoly<C> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, Rational};

    type P = BiPoly<Rational>;

    #[test]
    fn square_renders_descending() {
        let f = &P::y().pow(2) - &P::x().pow(3);
        assert_eq!(f.pow(2).to_string(), "y^4 - 2*x^3*y^2 + x^6");
        assert_eq!(f.render("X", "Y"), "Y^2 - X^3");
    }

    #[test]
    fn partials() {
        let f = P::from_terms([(2, 3, int(1))]);
        assert_eq!(f.dx(), P::from_terms([(1, 3, int(2))]));
        assert_eq!(f.dy(), P::from_terms([(2, 2, int(3))]));
        assert!(P::one().dx().is_zero());
    }
}
