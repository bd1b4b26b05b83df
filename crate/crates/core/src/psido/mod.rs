//! Truncated pseudo-differential operators `sum_j a_j(x) D^j` with `j` bounded
//! above, and Schur normalization of monic operators.
//!
//! Every operator carries a floor: coefficients of `D^j` for `j < floor` are
//! unknown. Exact operators (finite sums) have no floor. Products and
//! inverses take the floor of the result as an argument and report a higher
//! one when the inputs are themselves truncated.

mod schur;
mod series;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use thiserror::Error;

use crate::scalars::{binomial, Coeff, Rational};
use crate::weyl::WeylOp;

pub use schur::{centralizer_criterion, qth_root, schur_normalize, Centralizer, Schur};
pub use series::XSeries;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PsidoError {
    #[error("leading coefficient is not invertible")]
    NonInvertible,
    #[error("leading coefficient is not a nonzero rational constant")]
    NonConstantLead,
    #[error("operator is not monic")]
    NotMonic,
    #[error("operator has order 0")]
    ZeroOrder,
    #[error("zero operator")]
    ZeroOperator,
    #[error("truncation too small: order {order} is undetermined")]
    Insufficient { order: i64 },
}

impl PsidoError {
    pub fn name(&self) -> &'static str {
        match self {
            PsidoError::NonInvertible => "NonInvertible",
            PsidoError::NonConstantLead => "NonConstantLead",
            PsidoError::NotMonic => "NotMonic",
            PsidoError::ZeroOrder => "ZeroOrder",
            PsidoError::ZeroOperator => "ZeroOperator",
            PsidoError::Insufficient { .. } => "Insufficient",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsiDO<C: Coeff> {
    terms: BTreeMap<i64, XSeries<C>>,
    floor: Option<i64>,
}

fn max_floor(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(p), Some(q)) => Some(p.max(q)),
        (p, None) | (None, p) => p,
    }
}

impl<C: Coeff> PsiDO<C> {
    pub fn new(terms: impl IntoIterator<Item = (i64, XSeries<C>)>, floor: Option<i64>) -> Self {
        let mut out = PsiDO { terms: BTreeMap::new(), floor };
        for (j, a) in terms {
            out.add_term(j, &a);
        }
        out
    }

    pub fn zero() -> Self {
        Self::new([], None)
    }

    pub fn one() -> Self {
        Self::d_pow(0)
    }

    /// `D^j` for any integer `j`.
    pub fn d_pow(j: i64) -> Self {
        Self::new([(j, XSeries::one())], None)
    }

    /// Multiplication by a function of `x`.
    pub fn function(a: XSeries<C>) -> Self {
        Self::new([(0, a)], None)
    }

    pub fn from_op(p: &WeylOp<C>) -> Self {
        let mut cols: BTreeMap<i64, Vec<C>> = BTreeMap::new();
        for (m, c) in p.terms() {
            let col = cols.entry(m.j as i64).or_default();
            if col.len() <= m.i as usize {
                col.resize(m.i as usize + 1, C::zero());
            }
            col[m.i as usize] = c.clone();
        }
        Self::new(cols.into_iter().map(|(j, c)| (j, XSeries::poly(c))), None)
    }

    fn add_term(&mut self, j: i64, a: &XSeries<C>) {
        if self.floor.is_some_and(|f| j < f) || a.is_zero() {
            return;
        }
        let sum = match self.terms.get(&j) {
            Some(b) => b + a,
            None => a.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&j);
        } else {
            self.terms.insert(j, sum);
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&i64, &XSeries<C>)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, j: i64) -> XSeries<C> {
        self.terms.get(&j).cloned().unwrap_or_else(XSeries::zero)
    }

    /// Lowest known exponent bound; `None` for exact operators.
    pub fn floor(&self) -> Option<i64> {
        self.floor
    }

    pub fn top(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.floor.is_none()
    }

    /// Drops everything below `floor`.
    pub fn truncate(&self, floor: i64) -> Self {
        Self::new(self.terms.iter().map(|(j, a)| (*j, a.clone())), max_floor(self.floor, Some(floor)))
    }

    /// Left multiplication by a function: `a * self`.
    pub fn mul_function(&self, a: &XSeries<C>) -> Self {
        Self::new(self.terms.iter().map(|(j, b)| (*j, a * b)), self.floor)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::new(self.terms.iter().map(|(j, b)| (*j, b.scale(r))), self.floor)
    }

    /// Product, kept down to `floor` (or higher when the factors are truncated).
    ///
    /// Uses `D^i a = sum_k binom(i, k) a^(k) D^(i-k)`, valid for negative `i`.
    pub fn mul(&self, rhs: &Self, floor: i64) -> Self {
        let bound = |f: Option<i64>, t: Option<i64>| match (f, t) {
            (Some(f), Some(t)) => Some(f + t),
            (Some(f), None) => Some(f),
            _ => None,
        };
        let known = max_floor(bound(self.floor, rhs.top()), bound(rhs.floor, self.top()));
        let eff = known.map_or(floor, |k| k.max(floor));
        let mut cut = known.is_some();
        let mut out: BTreeMap<i64, XSeries<C>> = BTreeMap::new();
        for (&j, b) in rhs.terms.iter().rev() {
            let mut ders = vec![b.clone()];
            for (&i, a) in self.terms.iter().rev() {
                let mut k = 0u32;
                loop {
                    let e = i + j - k as i64;
                    if e < eff {
                        cut = true;
                        break;
                    }
                    let bin = binomial(i, k);
                    if i >= 0 && k as i64 > i {
                        break;
                    }
                    if ders.len() <= k as usize {
                        let next = ders[k as usize - 1].derivative();
                        ders.push(next);
                    }
                    let dk = &ders[k as usize];
                    if dk.is_zero() {
                        break;
                    }
                    let term = (a * dk).mul_coeff(&C::from_integer(bin));
                    let slot = out.entry(e).or_insert_with(XSeries::zero);
                    *slot = &*slot + &term;
                    k += 1;
                }
            }
        }
        let floor = cut.then_some(eff);
        PsiDO::new(out, floor)
    }

    /// Coefficient of `D^e` in `self * rhs` for exact factors.
    fn product_coeff(&self, rhs: &Self, e: i64) -> XSeries<C> {
        let mut acc = XSeries::zero();
        for (&i, a) in &self.terms {
            for (&j, b) in &rhs.terms {
                let k = i + j - e;
                if k < 0 || (i >= 0 && k > i) {
                    continue;
                }
                let mut d = b.clone();
                for _ in 0..k {
                    d = d.derivative();
                    if d.is_zero() {
                        break;
                    }
                }
                if d.is_zero() {
                    continue;
                }
                acc = &acc + &(a * &d).mul_coeff(&C::from_integer(binomial(i, k as u32)));
            }
        }
        acc
    }

    /// Two-sided inverse down to `floor`, series coefficients modulo `x^m`.
    pub fn inverse(&self, floor: i64, m: usize) -> Result<Self, PsidoError> {
        let top = self.top().ok_or(PsidoError::NonInvertible)?;
        let u = &self.terms[&top];
        let uinv = u.inverse(m).ok_or(PsidoError::NonInvertible)?;
        if self.terms.len() == 1 && self.floor.is_none() && uinv.is_exact() && u.degree() == Some(0) {
            return Ok(Self::new([(-top, uinv)], None));
        }
        let eff = self.floor.map_or(floor, |f| floor.max(f - 2 * top));
        let mut out = PsiDO::zero();
        let mut t = 0i64;
        while -top - t >= eff {
            let c = self.product_coeff(&out, -t);
            let rhs = if t == 0 { &XSeries::one() - &c } else { -&c };
            out.add_term(-top - t, &(&uinv * &rhs));
            t += 1;
        }
        out.floor = Some(eff);
        Ok(out)
    }

    pub fn pow(&self, n: u32, floor: i64) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self, floor);
        }
        acc
    }

    /// Whether every coefficient of `D^j` with `j >= from` is known and equal in both.
    pub fn agrees_from(&self, other: &Self, from: i64) -> Option<bool> {
        let diff = self - other;
        if diff.floor.is_some_and(|f| f > from) {
            return None;
        }
        let mut determined = true;
        for (_, a) in diff.terms.range(from..) {
            if !a.known_zero() {
                return Some(false);
            }
            determined &= a.is_exact();
        }
        determined.then_some(true)
    }
}

impl<C: Coeff> fmt::Display for PsiDO<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (&j, a) in self.terms.iter().rev() {
            let constant = a.is_exact() && a.degree() == Some(0) && !a.is_compound();
            let op = match j {
                0 => None,
                j if j > 0 => Some(format!("D^{j}")),
                j => Some(format!("Dinv^{}", -j)),
            };
            parts.push(match op {
                None => a.to_string(),
                Some(op) if constant && a.coeff(0).is_one() => op,
                Some(op) if constant && (-a.coeff(0)).is_one() => format!("-{op}"),
                Some(op) if constant => format!("{a}*{op}"),
                Some(op) => format!("({a})*{op}"),
            });
        }
        if let Some(fl) = self.floor {
            let e = fl - 1;
            parts.push(if e >= 0 { format!("O(D^{e})") } else { format!("O(Dinv^{})", -e) });
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        for (n, part) in parts.iter().enumerate() {
            match (n, part.strip_prefix('-')) {
                (0, _) => f.write_str(part)?,
                (_, Some(rest)) => write!(f, " - {rest}")?,
                (_, None) => write!(f, " + {part}")?,
            }
        }
        Ok(())
    }
}

impl<C: Coeff> Add<&PsiDO<C>> for &PsiDO<C> {
    type Output = PsiDO<C>;

    fn add(self, rhs: &PsiDO<C>) -> PsiDO<C> {
        let mut out = self.clone();
        out.floor = max_floor(self.floor, rhs.floor);
        out.terms.retain(|j, _| out.floor.is_none_or(|f| *j >= f));
        for (&j, a) in &rhs.terms {
            out.add_term(j, a);
        }
        out
    }
}

impl<C: Coeff> Neg for &PsiDO<C> {
    type Output = PsiDO<C>;

    fn neg(self) -> PsiDO<C> {
        PsiDO::new(self.terms.iter().map(|(j, a)| (*j, -a)), self.floor)
    }
}

impl<C: Coeff> Sub<&PsiDO<C>> for &PsiDO<C> {
    type Output = PsiDO<C>;

    fn sub(self, rhs: &PsiDO<C>) -> PsiDO<C> {
        self + &-rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;

    type S = XSeries<Rational>;
    type P = PsiDO<Rational>;

    fn poly(c: &[i64]) -> S {
        S::poly(c.iter().map(|&n| int(n)).collect())
    }

    #[test]
    fn d_times_dinv_is_exact() {
        let p = P::d_pow(1).mul(&P::d_pow(-1), -10);
        assert_eq!(p, P::one());
        assert!(p.floor().is_none());
    }

    #[test]
    fn dinv_past_x() {
        let p = P::d_pow(-1).mul(&P::function(poly(&[0, 1])), -10);
        let want = P::new([(-1, poly(&[0, 1])), (-2, poly(&[-1]))], None);
        assert_eq!(p, want);
        assert_eq!(p.to_string(), "(x)*Dinv^1 - Dinv^2");
    }

    #[test]
    fn neumann_inverse_multiplies_back() {
        let a = P::new([(0, poly(&[1])), (-1, poly(&[0, 1]))], None);
        let inv = a.inverse(-6, 8).unwrap();
        assert_eq!(inv.coeff(-1), poly(&[0, -1]));
        assert_eq!(inv.coeff(-2).coeff(2), int(1));
        assert_eq!(a.mul(&inv, -6).agrees_from(&P::one(), -5), Some(true));
        assert_eq!(inv.mul(&a, -6).agrees_from(&P::one(), -5), Some(true));
    }

    #[test]
    fn non_invertible_lead() {
        let a = P::new([(1, poly(&[0, 1]))], None);
        assert_eq!(a.inverse(-3, 4), Err(PsidoError::NonInvertible));
    }

    #[test]
    fn truncated_factors_raise_floor() {
        let a = P::new([(0, poly(&[1]))], Some(-3));
        let p = a.mul(&P::d_pow(2), -10);
        assert_eq!(p.floor(), Some(-1));
    }
}
