//! Supports, Newton polygons and `(sigma, rho)`-weight filtrations.
//!
//! For a weight `w = (s, r)` the degree of `x^i D^j` is `s*i + r*j`. The top
//! of an operator is the set of support points of maximal degree; its
//! homogeneous part is the commutative polynomial (in `x`, `y`) built from the
//! corresponding terms, with `y` standing for `D`.

use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::scalars::{Coeff, Rational};
use crate::weyl::{BiPoly, Monomial, WeylOp};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolygonError {
    #[error("operation undefined on the zero operator")]
    ZeroOperator,
    #[error("weight (0, 0) is not allowed")]
    ZeroWeight,
    #[error("weight needs sigma + rho > 0")]
    NonPositiveWeightSum,
    #[error("bound must be at least 1")]
    BadBound,
}

impl PolygonError {
    pub fn name(&self) -> &'static str {
        match self {
            PolygonError::ZeroOperator => "ZeroOperator",
            PolygonError::ZeroWeight => "ZeroWeight",
            PolygonError::NonPositiveWeightSum => "NonPositiveWeightSum",
            PolygonError::BadBound => "BadBound",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVec {
    pub sigma: Rational,
    pub rho: Rational,
}

impl WeightVec {
    pub fn new(sigma: Rational, rho: Rational) -> Result<Self, PolygonError> {
        if sigma.is_zero() && rho.is_zero() {
            return Err(PolygonError::ZeroWeight);
        }
        Ok(WeightVec { sigma, rho })
    }

    pub fn int(sigma: i64, rho: i64) -> Result<Self, PolygonError> {
        Self::new(Rational::from_integer(sigma.into()), Rational::from_integer(rho.into()))
    }

    pub fn of(&self, m: Monomial) -> Rational {
        &self.sigma * Rational::from_integer(m.i.into()) + &self.rho * Rational::from_integer(m.j.into())
    }

    pub fn sum(&self) -> Rational {
        &self.sigma + &self.rho
    }

    fn require_positive_sum(&self) -> Result<(), PolygonError> {
        if self.sum().is_positive() {
            Ok(())
        } else {
            Err(PolygonError::NonPositiveWeightSum)
        }
    }
}

impl fmt::Display for WeightVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.sigma, self.rho)
    }
}

/// `v_w(P)`, the largest weighted degree over the support.
pub fn weight_degree<C: Coeff>(p: &WeylOp<C>, w: &WeightVec) -> Result<Rational, PolygonError> {
    p.terms()
        .map(|(m, _)| w.of(*m))
        .max()
        .ok_or(PolygonError::ZeroOperator)
}

pub fn top_set<C: Coeff>(p: &WeylOp<C>, w: &WeightVec) -> Result<Vec<Monomial>, PolygonError> {
    let v = weight_degree(p, w)?;
    Ok(p.terms().map(|(m, _)| *m).filter(|m| w.of(*m) == v).collect())
}

/// Terms of maximal weighted degree, as an operator.
pub fn top_terms<C: Coeff>(p: &WeylOp<C>, w: &WeightVec) -> Result<WeylOp<C>, PolygonError> {
    let v = weight_degree(p, w)?;
    Ok(p.filter(|m| w.of(m) == v))
}

/// `f_w(P)`: the top terms read as a commutative polynomial in `(x, y)`.
pub fn hom_part<C: Coeff>(p: &WeylOp<C>, w: &WeightVec) -> Result<BiPoly<C>, PolygonError> {
    Ok(as_bipoly(&top_terms(p, w)?))
}

pub fn as_bipoly<C: Coeff>(p: &WeylOp<C>) -> BiPoly<C> {
    BiPoly::from_terms(p.terms().map(|(m, c)| (m.i, m.j, c.clone())))
}

/// Inverse of [`as_bipoly`]: `x^i y^j` becomes the normal-ordered `x^i D^j`.
pub fn from_bipoly<C: Coeff>(f: &BiPoly<C>) -> WeylOp<C> {
    WeylOp::from_terms(f.terms().map(|(&(i, j), c)| (i, j, c.clone())))
}

pub fn is_homogeneous<C: Coeff>(p: &WeylOp<C>, w: &WeightVec) -> Result<bool, PolygonError> {
    Ok(top_set(p, w)?.len() == p.len())
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Vertices of the convex hull of `E(P)`, counterclockwise, starting at the
/// lexicographically smallest point. Collinear boundary points are dropped.
pub fn newton_polygon<C: Coeff>(p: &WeylOp<C>) -> Result<Vec<(u32, u32)>, PolygonError> {
    if p.is_zero() {
        return Err(PolygonError::ZeroOperator);
    }
    Ok(convex_hull(p.terms().map(|(m, _)| (m.i, m.j)).collect()))
}

pub fn convex_hull(mut pts: Vec<(u32, u32)>) -> Vec<(u32, u32)> {
    pts.sort_unstable();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let q: Vec<(i64, i64)> = pts.iter().map(|&(a, b)| (a as i64, b as i64)).collect();
    let chain = |it: &mut dyn Iterator<Item = (i64, i64)>| {
        let mut h: Vec<(i64, i64)> = Vec::new();
        for pt in it {
            while h.len() >= 2 && cross(h[h.len() - 2], h[h.len() - 1], pt) <= 0 {
                h.pop();
            }
            h.push(pt);
        }
        h.pop();
        h
    };
    let mut hull = chain(&mut q.iter().copied());
    hull.extend(chain(&mut q.iter().rev().copied()));
    hull.into_iter().map(|(a, b)| (a as u32, b as u32)).collect()
}

/// The supporting line `sigma*x + rho*y = theta` touching the top set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopLine {
    pub sigma: Rational,
    pub rho: Rational,
    pub theta: Rational,
}

impl fmt::Display for TopLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.rho.is_negative() { "-" } else { "+" };
        write!(f, "{}*x {} {}*y = {}", self.sigma, sign, self.rho.abs(), self.theta)
    }
}

pub fn top_line<C: Coeff>(p: &WeylOp<C>, w: &WeightVec) -> Result<TopLine, PolygonError> {
    Ok(TopLine {
        sigma: w.sigma.clone(),
        rho: w.rho.clone(),
        theta: weight_degree(p, w)?,
    })
}

/// `{f, g} = f_x g_y - f_y g_x`, so that `{x, y} = 1`.
pub fn poisson<C: Coeff>(f: &BiPoly<C>, g: &BiPoly<C>) -> BiPoly<C> {
    &(&f.dx() * &g.dy()) - &(&f.dy() * &g.dx())
}

/// Decides whether `g^v = c f^w` for a nonzero scalar `c` of the fraction
/// field, returning `c` when it exists.
pub fn proportional_powers<C: Coeff>(
    f: &BiPoly<C>,
    g: &BiPoly<C>,
    v: u32,
    w: u32,
) -> Result<Option<C::Frac>, PolygonError> {
    if f.is_zero() || g.is_zero() {
        return Err(PolygonError::ZeroOperator);
    }
    let gv = g.pow(v);
    let fw = f.pow(w);
    if gv.len() != fw.len() || gv.terms().zip(fw.terms()).any(|(a, b)| a.0 != b.0) {
        return Ok(None);
    }
    let (_, lg) = gv.terms().next().expect("nonzero");
    let (_, lf) = fw.terms().next().expect("nonzero");
    if gv.scale(lf) != fw.scale(lg) {
        return Ok(None);
    }
    Ok(Some(C::Frac::from(lg.clone()) / C::Frac::from(lf.clone())))
}

/// `[P, Q] = T + U` with `T` the part of weighted degree
/// `v_w(P) + v_w(Q) - sigma - rho` and `U` everything below it.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition<C: Coeff> {
    pub t: WeylOp<C>,
    pub u: WeylOp<C>,
    pub degree: Rational,
}

pub fn commutator_decomposition<C: Coeff>(
    p: &WeylOp<C>,
    q: &WeylOp<C>,
    w: &WeightVec,
) -> Result<Decomposition<C>, PolygonError> {
    w.require_positive_sum()?;
    let degree = weight_degree(p, w)? + weight_degree(q, w)? - w.sum();
    let c = p.commutator(q);
    let t = c.filter(|m| w.of(m) == degree);
    let u = c.filter(|m| w.of(m) != degree);
    Ok(Decomposition { t, u, degree })
}

/// `P` and `Q` almost commute when the top part `T` of `[P, Q]` vanishes.
pub fn almost_commute<C: Coeff>(
    p: &WeylOp<C>,
    q: &WeylOp<C>,
    w: &WeightVec,
) -> Result<bool, PolygonError> {
    Ok(commutator_decomposition(p, q, w)?.t.is_zero())
}

pub fn is_monomial_type<C: Coeff>(p: &WeylOp<C>, w: &WeightVec) -> Result<bool, PolygonError> {
    Ok(top_set(p, w)?.len() == 1)
}

/// Some support point `(i, j)` with `i != 0` and `j != 0`.
pub fn has_mixture_term<C: Coeff>(p: &WeylOp<C>) -> bool {
    p.terms().any(|(m, _)| m.i != 0 && m.j != 0)
}

/// `Some((l, k))` when the support sits in `[0,l] x [0,k]` with the corner
/// `(l, k)` present and `l, k >= 1`.
pub fn is_rectangular<C: Coeff>(p: &WeylOp<C>) -> Result<Option<(u32, u32)>, PolygonError> {
    let l = p.ord_x().map_err(|_| PolygonError::ZeroOperator)?;
    let k = p.ord().map_err(|_| PolygonError::ZeroOperator)?;
    let corner = l >= 1 && k >= 1 && !p.coeff(l, k).is_zero();
    Ok(corner.then_some((l, k)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexOutcome {
    Found(u32),
    /// No `r <= bound` qualifies.
    Exceeded(u32),
    /// `(ad P)^r Q` became zero before anything qualified.
    Vanished(u32),
}

impl fmt::Display for IndexOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexOutcome::Found(r) => write!(f, "{r}"),
            IndexOutcome::Exceeded(b) => write!(f, "exceeded bound {b}"),
            IndexOutcome::Vanished(r) => write!(f, "vanished at {r}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlmostCommuteIndex {
    /// First `r` with a monomial top for `(ad P)^r Q`.
    pub n: IndexOutcome,
    /// First `r` with `(ad P)^r Q` almost commuting with `P`.
    pub m: IndexOutcome,
}

/// Scans `r = 1..=bound`. When `Q` itself already almost commutes with `P`
/// both indices are reported as 0.
pub fn almost_commute_index<C: Coeff>(
    p: &WeylOp<C>,
    q: &WeylOp<C>,
    w: &WeightVec,
    bound: u32,
) -> Result<AlmostCommuteIndex, PolygonError> {
    if bound == 0 {
        return Err(PolygonError::BadBound);
    }
    w.require_positive_sum()?;
    if almost_commute(p, q, w)? {
        return Ok(AlmostCommuteIndex {
            n: IndexOutcome::Found(0),
            m: IndexOutcome::Found(0),
        });
    }
    let mut n = None;
    let mut m = None;
    let mut cur = q.clone();
    for r in 1..=bound {
        cur = p.commutator(&cur);
        if cur.is_zero() {
            let done = IndexOutcome::Vanished(r);
            return Ok(AlmostCommuteIndex {
                n: n.unwrap_or(done),
                m: m.unwrap_or(done),
            });
        }
        if n.is_none() && is_monomial_type(&cur, w)? {
            n = Some(IndexOutcome::Found(r));
        }
        if m.is_none() && almost_commute(p, &cur, w)? {
            m = Some(IndexOutcome::Found(r));
        }
        if n.is_some() && m.is_some() {
            break;
        }
    }
    Ok(AlmostCommuteIndex {
        n: n.unwrap_or(IndexOutcome::Exceeded(bound)),
        m: m.unwrap_or(IndexOutcome::Exceeded(bound)),
    })
}
