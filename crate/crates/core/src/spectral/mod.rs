//! Commuting pairs, polynomial relations between them, and the spaces
//! `V_Q`, `N(P, n)`, `D(P, lambda)`, `C(P)` attached to an operator.

mod orbit;

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::scalars::{nullspace, rank, Coeff, ParamPoly, Rational};
use crate::weyl::{eval_poly, BiPoly, Monomial, WeylOp};

pub use orbit::{orbit_search, Collision, OrbitReport};

/// Largest coefficient matrix `find_relation` will build.
pub const MAX_MATRIX_ENTRIES: usize = 4_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("relation does not vanish at the pair")]
    NotASolution,
    #[error("both operators have order 0")]
    Trivial,
    #[error("zero relation")]
    ZeroRelation,
    #[error("pair satisfies its relation but does not commute")]
    TheoremViolation,
    #[error("linear system too large: {rows} x {cols}")]
    TooLarge { rows: usize, cols: usize },
    #[error("no generators")]
    EmptyGenerators,
    #[error("bound must be at least 1")]
    ZeroBound,
}

impl SpectralError {
    pub fn name(&self) -> &'static str {
        match self {
            SpectralError::NotASolution => "NotASolution",
            SpectralError::Trivial => "Trivial",
            SpectralError::ZeroRelation => "ZeroRelation",
            SpectralError::TheoremViolation => "TheoremViolation",
            SpectralError::TooLarge { .. } => "TooLarge",
            SpectralError::EmptyGenerators => "EmptyGenerators",
            SpectralError::ZeroBound => "ZeroBound",
        }
    }
}

/// A pair with `f(P, Q) = 0`, at least one of positive order.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionPair<C: Coeff> {
    p: WeylOp<C>,
    q: WeylOp<C>,
    relation: BiPoly<C>,
}

impl<C: Coeff> SolutionPair<C> {
    pub fn new(p: WeylOp<C>, q: WeylOp<C>, relation: BiPoly<C>) -> Result<Self, SpectralError> {
        if relation.is_empty() {
            return Err(SpectralError::ZeroRelation);
        }
        if p.ord().unwrap_or(0) == 0 && q.ord().unwrap_or(0) == 0 {
            return Err(SpectralError::Trivial);
        }
        if !eval_poly(&relation, &p, &q).is_zero() {
            return Err(SpectralError::NotASolution);
        }
        Ok(SolutionPair { p, q, relation })
    }

    pub fn p(&self) -> &WeylOp<C> {
        &self.p
    }

    pub fn q(&self) -> &WeylOp<C> {
        &self.q
    }

    pub fn relation(&self) -> &BiPoly<C> {
        &self.relation
    }

    pub fn specialize(&self, alpha: &Rational) -> Result<SolutionPair<Rational>, SpectralError> {
        let f = BiPoly::from_terms(self.relation.terms().map(|(&(i, j), c)| (i, j, c.specialize(alpha))));
        SolutionPair::new(self.p.specialize(alpha), self.q.specialize(alpha), f)
    }

    /// Exact key of the operator pair, injective on normal forms.
    pub fn canonical_key(&self) -> String {
        format!("{}|{}", self.p.canonical_key(), self.q.canonical_key())
    }
}

/// `(D^2 - x^3 - a)^2 - 2x`.
pub fn l4() -> WeylOp<ParamPoly> {
    let h = dixmier_h();
    &h.pow(2) - &WeylOp::x().scale_rational(&Rational::from_integer(2.into()))
}

/// `H^3 - 3/2 (x H + H x)` with `H = D^2 - x^3 - a`.
pub fn l6() -> WeylOp<ParamPoly> {
    let h = dixmier_h();
    let x = WeylOp::x();
    let sym = &(&x * &h) + &(&h * &x);
    &h.pow(3) - &sym.scale_rational(&Rational::new(3.into(), 2.into()))
}

fn dixmier_h() -> WeylOp<ParamPoly> {
    let d2 = WeylOp::d().pow(2);
    let x3 = WeylOp::x().pow(3);
    &(&d2 - &x3) - &WeylOp::constant(ParamPoly::alpha())
}

/// `(L4, L6)` with relation `Y^2 - X^3 - a`.
pub fn dixmier_pair() -> SolutionPair<ParamPoly> {
    let f = BiPoly::from_terms([
        (0, 2, ParamPoly::one()),
        (3, 0, -ParamPoly::one()),
        (0, 0, -ParamPoly::alpha()),
    ]);
    SolutionPair::new(l4(), l6(), f).expect("Dixmier identity")
}

/// Monomials `X^i Y^j` in the box, by total degree and then by `i`.
pub fn relation_columns(degx: u32, degy: u32) -> Vec<(u32, u32)> {
    let mut cols: Vec<(u32, u32)> = (0..=degx).flat_map(|i| (0..=degy).map(move |j| (i, j))).collect();
    cols.sort_by_key(|&(i, j)| (i + j, i));
    cols
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationReport<C: Coeff> {
    pub basis: Vec<BiPoly<C>>,
    pub rank: usize,
    pub columns: usize,
    pub rows: usize,
}

/// All `f` with `deg_X f <= degx`, `deg_Y f <= degy` and `f(P, Q) = 0`.
///
/// Each basis element comes from the reduced echelon kernel basis over the
/// fraction field, with columns ordered as in [`relation_columns`], and is
/// then scaled back to coefficients in `C`.
pub fn find_relation<C: Coeff>(
    p: &WeylOp<C>,
    q: &WeylOp<C>,
    degx: u32,
    degy: u32,
) -> Result<RelationReport<C>, SpectralError> {
    let cols = relation_columns(degx, degy);
    let mut pp = vec![WeylOp::one()];
    for k in 0..degx as usize {
        pp.push(&pp[k] * p);
    }
    let mut qp = vec![WeylOp::one()];
    for k in 0..degy as usize {
        qp.push(&qp[k] * q);
    }
    let images: Vec<WeylOp<C>> = cols.iter().map(|&(i, j)| &pp[i as usize] * &qp[j as usize]).collect();
    let monos: BTreeSet<Monomial> = images.iter().flat_map(|im| im.support()).collect();
    let (rows, ncols) = (monos.len(), cols.len());
    if rows.saturating_mul(ncols) > MAX_MATRIX_ENTRIES {
        return Err(SpectralError::TooLarge { rows, cols: ncols });
    }
    let index: BTreeMap<Monomial, usize> = monos.iter().enumerate().map(|(n, m)| (*m, n)).collect();
    let mut m = vec![vec![C::Frac::zero(); ncols]; rows];
    for (c, im) in images.iter().enumerate() {
        for (mono, v) in im.terms() {
            m[index[mono]][c] = C::Frac::from(v.clone());
        }
    }
    let r = rank(&m, ncols);
    let basis = nullspace(&m, ncols)
        .into_iter()
        .map(|v| {
            let w = C::clear_denominators(&v);
            BiPoly::from_terms(cols.iter().zip(w).map(|(&(i, j), c)| (i, j, c)))
        })
        .collect();
    Ok(RelationReport { basis, rank: r, columns: ncols, rows })
}

/// `Ok` when the pair commutes; a verified pair that does not is a hard error.
pub fn commutation_theorem_check<C: Coeff>(pair: &SolutionPair<C>) -> Result<(), SpectralError> {
    if pair.p.commutator(&pair.q).is_zero() {
        Ok(())
    } else {
        Err(SpectralError::TheoremViolation)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport<C: Coeff> {
    /// `dim span{(ad P)^n Q : n <= bound}`.
    pub vq_dim: usize,
    /// Whether the span is closed under `ad P`, so `vq_dim` is `dim V_Q`
    /// rather than a lower bound.
    pub vq_stable: bool,
    /// `n` with `(ad P)^n Q != 0 = (ad P)^(n+1) Q`, if `n <= bound`.
    pub nilpotency: Option<u32>,
    /// `lambda` with `[P, Q] = lambda Q`.
    pub eigen: Option<C::Frac>,
    pub central: bool,
}

fn coordinates<C: Coeff>(ops: &[WeylOp<C>]) -> Vec<Vec<C::Frac>> {
    let monos: BTreeSet<Monomial> = ops.iter().flat_map(|o| o.support()).collect();
    monos
        .iter()
        .map(|m| ops.iter().map(|o| C::Frac::from(o.coeff(m.i, m.j))).collect())
        .collect()
}

pub fn space_probes<C: Coeff>(p: &WeylOp<C>, q: &WeylOp<C>, bound: u32) -> Result<ProbeReport<C>, SpectralError> {
    if bound == 0 {
        return Err(SpectralError::ZeroBound);
    }
    let mut iterates = vec![q.clone()];
    for n in 0..=bound as usize {
        let next = p.commutator(&iterates[n]);
        iterates.push(next);
    }
    // iterates[n] = (ad P)^n Q for n = 0..=bound+1
    let nilpotency = (0..=bound)
        .find(|&n| !iterates[n as usize].is_zero() && iterates[n as usize + 1].is_zero());
    let span = &iterates[..=bound as usize];
    let vq_dim = rank(&coordinates(span), span.len());
    let vq_stable = rank(&coordinates(&iterates), iterates.len()) == vq_dim;
    let comm = &iterates[1];
    let central = comm.is_zero();
    let eigen = eigenvalue(q, comm);
    Ok(ProbeReport { vq_dim, vq_stable, nilpotency, eigen, central })
}

/// `lambda` with `comm = lambda q`, for nonzero `q`.
fn eigenvalue<C: Coeff>(q: &WeylOp<C>, comm: &WeylOp<C>) -> Option<C::Frac> {
    let (m, c) = q.terms().next_back()?;
    let lambda = C::Frac::from(comm.coeff(m.i, m.j)) / C::Frac::from(c.clone());
    let monos: BTreeSet<Monomial> = q.support().into_iter().chain(comm.support()).collect();
    monos
        .iter()
        .all(|m| C::Frac::from(comm.coeff(m.i, m.j)) == lambda.clone() * C::Frac::from(q.coeff(m.i, m.j)))
        .then_some(lambda)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingRank {
    pub rank: u32,
    /// Least total exponent from which the gcd no longer changed.
    pub stable_from: u32,
}

/// `gcd{ord(g1^e1 ... gk^ek) : e1 + ... + ek <= bound}`, using
/// `ord(PQ) = ord P + ord Q`.
pub fn ring_rank<C: Coeff>(gens: &[WeylOp<C>], bound: u32) -> Result<RingRank, SpectralError> {
    if gens.is_empty() {
        return Err(SpectralError::EmptyGenerators);
    }
    if bound == 0 {
        return Err(SpectralError::ZeroBound);
    }
    let ords: Vec<u32> = gens.iter().filter_map(|g| g.ord().ok()).collect();
    // reachable orders with total exponent exactly t
    let mut level: BTreeSet<u32> = BTreeSet::from([0]);
    let mut g = 0u32;
    let mut stable_from = 0;
    for t in 1..=bound {
        level = level.iter().flat_map(|&s| ords.iter().map(move |&o| s + o)).collect();
        let next = level.iter().fold(g, |acc, &o| acc.gcd(&o));
        if next != g {
            stable_from = t;
        }
        g = next;
    }
    Ok(RingRank { rank: g, stable_from })
}
