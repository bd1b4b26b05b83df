use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalars::{Coeff, Rational};
use crate::weyl::render::{join_terms, power};

/// Power series in `x`, either an exact polynomial (`prec == None`) or known
/// modulo `x^prec`.
#[derive(Debug, Clone, PartialEq)]
pub struct XSeries<C: Coeff> {
    coeffs: Vec<C>,
    prec: Option<usize>,
}

fn min_prec(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(p), Some(q)) => Some(p.min(q)),
        (p, None) | (None, p) => p,
    }
}

impl<C: Coeff> XSeries<C> {
    fn build(mut coeffs: Vec<C>, prec: Option<usize>) -> Self {
        if let Some(p) = prec {
            coeffs.truncate(p);
        }
        while coeffs.last().is_some_and(C::is_zero) {
            coeffs.pop();
        }
        XSeries { coeffs, prec }
    }

    /// Polynomial from coefficients listed low to high.
    pub fn poly(coeffs: Vec<C>) -> Self {
        Self::build(coeffs, None)
    }

    pub fn series(coeffs: Vec<C>, prec: usize) -> Self {
        Self::build(coeffs, Some(prec))
    }

    pub fn zero() -> Self {
        Self::poly(Vec::new())
    }

    pub fn constant(c: C) -> Self {
        Self::poly(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> C {
        self.coeffs.get(n).cloned().unwrap_or_else(C::zero)
    }

    pub fn prec(&self) -> Option<usize> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// Exactly zero, as opposed to `O(x^p)`.
    pub fn is_zero(&self) -> bool {
        self.prec.is_none() && self.coeffs.is_empty()
    }

    /// Every known coefficient vanishes.
    pub fn known_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in `x` of the known part.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::build(self.coeffs.iter().map(|c| c.scale(r)).collect(), self.prec)
    }

    pub fn mul_coeff(&self, c: &C) -> Self {
        Self::build(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(), self.prec)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, c)| c.scale(&Rational::from_integer(n.into())))
            .collect();
        Self::build(coeffs, self.prec.map(|p| p.saturating_sub(1)))
    }

    /// Antiderivative with zero constant term.
    pub fn integral(&self) -> Self {
        let mut coeffs = vec![C::zero()];
        for (n, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.scale(&Rational::new(1.into(), (n as i64 + 1).into())));
        }
        Self::build(coeffs, self.prec.map(|p| p + 1))
    }

    /// `1 / self` modulo `x^m`; `None` when the constant term is not a unit.
    /// Constants invert exactly.
    pub fn inverse(&self, m: usize) -> Option<Self> {
        let inv0 = C::one().try_div(&self.coeff(0))?;
        if self.is_exact() && self.coeffs.len() == 1 {
            return Some(Self::constant(inv0));
        }
        let p = min_prec(self.prec, Some(m)).unwrap_or(m);
        let mut out: Vec<C> = Vec::with_capacity(p);
        for n in 0..p {
            let mut acc = if n == 0 { C::one() } else { C::zero() };
            for k in 1..=n.min(self.coeffs.len().saturating_sub(1)) {
                acc = acc - self.coeffs[k].clone() * out[n - k].clone();
            }
            out.push(acc * inv0.clone());
        }
        Some(Self::series(out, p))
    }

    /// `exp(self)` modulo `x^m`; `None` unless the constant term is zero.
    pub fn exp(&self, m: usize) -> Option<Self> {
        if !self.coeff(0).is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::one());
        }
        let p = min_prec(self.prec, Some(m)).unwrap_or(m);
        let mut out: Vec<C> = Vec::with_capacity(p);
        for n in 0..p {
            if n == 0 {
                out.push(C::one());
                continue;
            }
            let mut acc = C::zero();
            for k in 1..=n.min(self.coeffs.len().saturating_sub(1)) {
                acc = acc + self.coeffs[k].scale(&Rational::from_integer(k.into())) * out[n - k].clone();
            }
            out.push(acc.scale(&Rational::new(1.into(), (n as i64).into())));
        }
        Some(Self::series(out, p))
    }

    fn text(&self) -> String {
        let monos: Vec<(&C, String)> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, c)| (c, power("x", n as u32).unwrap_or_default()))
            .collect();
        let body = join_terms(monos.into_iter());
        match self.prec {
            None => body,
            Some(p) if self.coeffs.is_empty() => format!("O({})", power("x", p as u32).unwrap_or("1".into())),
            Some(p) => format!("{body} + O({})", power("x", p as u32).unwrap_or("1".into())),
        }
    }

    /// Whether the text needs parentheses as a factor.
    pub(crate) fn is_compound(&self) -> bool {
        let nonzero = self.coeffs.iter().filter(|c| !c.is_zero()).count();
        nonzero + usize::from(self.prec.is_some()) > 1
            || self.coeffs.iter().any(|c| !c.is_zero() && c.term_text().2)
    }
}

impl<C: Coeff> fmt::Display for XSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text())
    }
}

impl<C: Coeff> Add<&XSeries<C>> for &XSeries<C> {
    type Output = XSeries<C>;

    fn add(self, rhs: &XSeries<C>) -> XSeries<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        XSeries::build(
            (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect(),
            min_prec(self.prec, rhs.prec),
        )
    }
}

impl<C: Coeff> Sub<&XSeries<C>> for &XSeries<C> {
    type Output = XSeries<C>;

    fn sub(self, rhs: &XSeries<C>) -> XSeries<C> {
        self + &-rhs
    }
}

impl<C: Coeff> Neg for &XSeries<C> {
    type Output = XSeries<C>;

    fn neg(self) -> XSeries<C> {
        XSeries::build(self.coeffs.iter().map(|c| -c.clone()).collect(), self.prec)
    }
}

impl<C: Coeff> Mul<&XSeries<C>> for &XSeries<C> {
    type Output = XSeries<C>;

    fn mul(self, rhs: &XSeries<C>) -> XSeries<C> {
        if self.is_zero() || rhs.is_zero() {
            return XSeries::zero();
        }
        let prec = min_prec(self.prec, rhs.prec);
        let cap = prec.unwrap_or(usize::MAX);
        let mut out = vec![C::zero(); (self.coeffs.len() + rhs.coeffs.len()).saturating_sub(1).min(cap)];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j >= out.len() {
                    break;
                }
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        XSeries::build(out, prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, rat};

    fn p(c: &[i64]) -> XSeries<Rational> {
        XSeries::poly(c.iter().map(|&n| int(n)).collect())
    }

    #[test]
    fn exact_calculus() {
        let f = p(&[1, 2, 3]);
        assert_eq!(f.derivative(), p(&[2, 6]));
        assert_eq!(f.integral().derivative(), f);
        assert_eq!(f.integral().coeff(0), int(0));
        assert_eq!((&f * &p(&[0, 1])), p(&[0, 1, 2, 3]));
        assert_eq!(f.to_string(), "3*x^2 + 2*x + 1");
    }

    #[test]
    fn geometric_inverse() {
        let inv = p(&[1, -1]).inverse(5).unwrap();
        assert_eq!(inv, XSeries::series(vec![int(1); 5], 5));
        assert_eq!((&inv * &p(&[1, -1])).to_string(), "1 + O(x^5)");
        assert!(p(&[0, 1]).inverse(5).is_none());
        assert_eq!(p(&[4]).inverse(5).unwrap(), XSeries::constant(rat(1, 4)));
    }

    #[test]
    fn exponential_of_x() {
        let e = p(&[0, 1]).exp(5).unwrap();
        let want = [1, 1, 2, 6, 24].map(|n| rat(1, n)).to_vec();
        assert_eq!(e, XSeries::series(want, 5));
        assert_eq!(e.derivative().prec(), Some(4));
        assert!(p(&[1, 1]).exp(5).is_none());
    }
}
