//! Normal-form arithmetic in the first Weyl algebra `K[x][D]`, `[D, x] = 1`.
//!
//! An operator is stored as `sum a_ij x^i D^j` with every `x` to the left of
//! every `D`; equality of operators is equality of these term maps.

mod bipoly;
pub(crate) mod render;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::scalars::{Coeff, ParamPoly, Rational, ScalarError};

pub use bipoly::BiPoly;
pub(crate) use render::{join_terms, power};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("operation undefined on the zero operator")]
    ZeroOperator,
    #[error("malformed operator json: {0}")]
    BadJson(String),
}

impl WeylError {
    pub fn name(&self) -> &'static str {
        match self {
            WeylError::ZeroOperator => "ZeroOperator",
            WeylError::BadJson(_) => "BadJson",
        }
    }
}

impl From<ScalarError> for WeylError {
    fn from(e: ScalarError) -> Self {
        WeylError::BadJson(e.to_string())
    }
}

/// Exponent pair of `x^i D^j`; ordered lexicographically by `(i, j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub i: u32,
    pub j: u32,
}

impl Monomial {
    pub fn new(i: u32, j: u32) -> Self {
        Monomial { i, j }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeylOp<C: Coeff> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> Default for WeylOp<C> {
    fn default() -> Self {
        WeylOp {
            terms: BTreeMap::new(),
        }
    }
}

impl<C: Coeff> WeylOp<C> {
    pub fn from_terms(terms: impl IntoIterator<Item = (u32, u32, C)>) -> Self {
        let mut op = Self::default();
        for (i, j, c) in terms {
            op.add_term(Monomial::new(i, j), c);
        }
        op
    }

    pub fn monomial(c: C, i: u32, j: u32) -> Self {
        Self::from_terms([(i, j, c)])
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn x() -> Self {
        Self::monomial(C::one(), 1, 0)
    }

    pub fn d() -> Self {
        Self::monomial(C::one(), 0, 1)
    }

    /// Polynomial in `x` from coefficients listed low to high.
    pub fn x_poly(coeffs: impl IntoIterator<Item = C>) -> Self {
        Self::from_terms(coeffs.into_iter().enumerate().map(|(i, c)| (i as u32, 0, c)))
    }

    /// Polynomial in `D` from coefficients listed low to high.
    pub fn d_poly(coeffs: impl IntoIterator<Item = C>) -> Self {
        Self::from_terms(coeffs.into_iter().enumerate().map(|(j, c)| (0, j as u32, c)))
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> C {
        self.terms
            .get(&Monomial::new(i, j))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    /// The support `E(P)`, ascending.
    pub fn support(&self) -> Vec<Monomial> {
        self.terms.keys().copied().collect()
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        WeylOp {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (*m, a.clone() * c.clone()))
                .filter(|(_, a)| !a.is_zero())
                .collect(),
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Self, c: &C) {
        for (m, a) in &other.terms {
            self.add_term(*m, a.clone() * c.clone());
        }
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(&C::from_rational(r.clone()))
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> WeylOp<D> {
        WeylOp::from_terms(self.terms.iter().map(|(m, c)| (m.i, m.j, f(c))))
    }

    /// Value at a rational value of the parameter `a`.
    pub fn specialize(&self, alpha: &Rational) -> WeylOp<Rational> {
        self.map_coeffs(|c| c.specialize(alpha))
    }

    /// Keeps the terms whose monomial satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(Monomial) -> bool) -> Self {
        WeylOp {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(**m))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
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

    pub fn commutator(&self, rhs: &Self) -> Self {
        &(self * rhs) - &(rhs * self)
    }

    /// `(ad P)^n Q` with `(ad P) Q = [P, Q]`.
    pub fn ad_power(&self, q: &Self, n: u32) -> Self {
        (0..n).fold(q.clone(), |acc, _| self.commutator(&acc))
    }

    /// Highest power of `D`.
    pub fn ord(&self) -> Result<u32, WeylError> {
        self.terms
            .keys()
            .map(|m| m.j)
            .max()
            .ok_or(WeylError::ZeroOperator)
    }

    /// Highest power of `x`.
    pub fn ord_x(&self) -> Result<u32, WeylError> {
        self.terms
            .keys()
            .map(|m| m.i)
            .max()
            .ok_or(WeylError::ZeroOperator)
    }

    /// Coefficient of `D^l`, as a polynomial in `x`.
    pub fn coeff_of_dpow(&self, l: u32) -> Self {
        WeylOp::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.j == l)
                .map(|(m, c)| (m.i, 0, c.clone())),
        )
    }

    /// Head term: the coefficient of the highest power of `D`.
    pub fn ht(&self) -> Result<Self, WeylError> {
        Ok(self.coeff_of_dpow(self.ord()?))
    }

    pub fn is_monic(&self) -> bool {
        self.ht().is_ok_and(|h| h.is_one())
    }

    /// `Some(c)` when the operator is the constant `c` (zero included).
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.iter().next() {
            None => Some(C::zero()),
            Some((m, c)) if self.terms.len() == 1 && m.i == 0 && m.j == 0 => Some(c.clone()),
            _ => None,
        }
    }

    /// True for polynomials in `x` alone (constants included).
    pub fn is_x_poly(&self) -> bool {
        self.terms.keys().all(|m| m.j == 0)
    }

    pub fn is_d_poly(&self) -> bool {
        self.terms.keys().all(|m| m.i == 0)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(m, c)| json!({"i": m.i, "j": m.j, "coeff": c.to_json()}))
            .collect();
        json!({ "terms": terms })
    }

    /// Canonical text key; injective on normal forms.
    pub fn canonical_key(&self) -> String {
        self.to_json().to_string()
    }
}

impl WeylOp<ParamPoly> {
    pub fn from_json(v: &Value) -> Result<Self, WeylError> {
        let bad = |m: &str| WeylError::BadJson(m.to_string());
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing terms array"))?;
        let mut out = Vec::new();
        for t in terms {
            let exp = |k: &str| {
                t.get(k)
                    .and_then(Value::as_u64)
                    .and_then(|e| u32::try_from(e).ok())
                    .ok_or_else(|| bad(&format!("missing exponent {k}")))
            };
            let c = ParamPoly::from_json(t.get("coeff").ok_or_else(|| bad("missing coeff"))?)?;
            out.push((exp("i")?, exp("j")?, c));
        }
        Ok(Self::from_terms(out))
    }
}

impl<C: Coeff> fmt::Display for WeylOp<C> {
    /// Terms by descending `D`-power, then descending `x`-power.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut keys: Vec<&Monomial> = self.terms.keys().collect();
        keys.sort_by(|a, b| (b.j, b.i).cmp(&(a.j, a.i)));
        let text = join_terms(keys.into_iter().map(|m| {
            let mono: Vec<String> = [power("x", m.i), power("D", m.j)]
                .into_iter()
                .flatten()
                .collect();
            (&self.terms[m], mono.join("*"))
        }));
        f.write_str(&text)
    }
}

/// Normal form of `D^j x^i`: `sum_t t! C(j,t) C(i,t) x^(i-t) D^(j-t)`.
pub fn reorder<C: Coeff>(j: u32, i: u32) -> WeylOp<C> {
    WeylOp::from_terms(
        reorder_factors(j, i)
            .into_iter()
            .enumerate()
            .map(|(t, f)| (i - t as u32, j - t as u32, C::from_integer(f))),
    )
}

/// `t! C(j,t) C(i,t)` for `t = 0..=min(i,j)`.
fn reorder_factors(j: u32, i: u32) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(i.min(j) as usize + 1);
    let mut f = BigInt::one();
    for t in 0..=i.min(j) {
        out.push(f.clone());
        f = f * (j - t) * (i - t) / (t + 1);
    }
    out
}

/// Evaluates a commutative polynomial `f(X, Y)` at `(P, Q)`, sending
/// `X^i Y^j` to `P^i Q^j` in that order.
pub fn eval_poly<C: Coeff>(f: &BiPoly<C>, p: &WeylOp<C>, q: &WeylOp<C>) -> WeylOp<C> {
    let (dx, dy) = f.degrees();
    let mut pp = vec![WeylOp::one()];
    for k in 0..dx as usize {
        pp.push(&pp[k] * p);
    }
    let mut qp = vec![WeylOp::one()];
    for k in 0..dy as usize {
        qp.push(&qp[k] * q);
    }
    f.terms().fold(WeylOp::zero(), |acc, (&(i, j), c)| {
        &acc + &(&pp[i as usize] * &qp[j as usize]).scale(c)
    })
}

impl<C: Coeff> Zero for WeylOp<C> {
    fn zero() -> Self {
        Self::default()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Coeff> One for WeylOp<C> {
    fn one() -> Self {
        Self::constant(C::one())
    }
}

impl<C: Coeff> Add<&WeylOp<C>> for &WeylOp<C> {
    type Output = WeylOp<C>;

    fn add(self, rhs: &WeylOp<C>) -> WeylOp<C> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<C: Coeff> Sub<&WeylOp<C>> for &WeylOp<C> {
    type Output = WeylOp<C>;

    fn sub(self, rhs: &WeylOp<C>) -> WeylOp<C> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl<C: Coeff> Neg for &WeylOp<C> {
    type Output = WeylOp<C>;

    fn neg(self) -> WeylOp<C> {
        WeylOp {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl<C: Coeff> Mul<&WeylOp<C>> for &WeylOp<C> {
    type Output = WeylOp<C>;

    /// `(a x^i D^j)(b x^k D^l) = a b x^i (D^j x^k) D^l`, with `D^j x^k` reordered.
    fn mul(self, rhs: &WeylOp<C>) -> WeylOp<C> {
        let mut acc: BTreeMap<Monomial, C> = BTreeMap::new();
        let mut factors: BTreeMap<(u32, u32), Vec<C>> = BTreeMap::new();
        for (m1, a) in &self.terms {
            for (m2, b) in &rhs.terms {
                let ab = a.clone() * b.clone();
                let fs = factors
                    .entry((m1.j, m2.i))
                    .or_insert_with(|| {
                        reorder_factors(m1.j, m2.i)
                            .into_iter()
                            .map(C::from_integer)
                            .collect()
                    });
                for (t, f) in fs.iter().enumerate() {
                    let t = t as u32;
                    let key = Monomial::new(m1.i + m2.i - t, m1.j + m2.j - t);
                    let term = if t == 0 { ab.clone() } else { ab.clone() * f.clone() };
                    match acc.get_mut(&key) {
                        Some(v) => *v = v.clone() + term,
                        None => {
                            acc.insert(key, term);
                        }
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        WeylOp { terms: acc }
    }
}

macro_rules! by_value {
    ($($tr:ident $m:ident),*) => {$(
        impl<C: Coeff> $tr for WeylOp<C> {
            type Output = WeylOp<C>;
            fn $m(self, rhs: WeylOp<C>) -> WeylOp<C> {
                (&self).$m(&rhs)
            }
        }
    )*};
}
by_value!(Add add, Sub sub, Mul mul);

impl<C: Coeff> Neg for WeylOp<C> {
    type Output = WeylOp<C>;

    fn neg(self) -> WeylOp<C> {
        -&self
    }
}
