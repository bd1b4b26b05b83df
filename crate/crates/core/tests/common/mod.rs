//! Oracles for the integration tests.
//!
//! Operators are compared through their action on `K[x]`: an operator of
//! order at most `b` is zero iff it kills `1, x, ..., x^b`. None of this goes
//! through the normal-form product of the library.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use weyl::morphism::TameGen;
use weyl::scalars::{int, Coeff, Rational};
use weyl::weyl::{BiPoly, WeylOp};

/// Dense polynomial in `x`, index = exponent.
pub type Poly<C> = Vec<C>;

pub fn trim<C: Coeff>(mut f: Poly<C>) -> Poly<C> {
    while f.last().is_some_and(|c| c.is_zero()) {
        f.pop();
    }
    f
}

pub fn x_pow<C: Coeff>(n: usize) -> Poly<C> {
    let mut f = vec![C::zero(); n + 1];
    f[n] = C::one();
    f
}

pub fn add<C: Coeff>(f: &[C], g: &[C]) -> Poly<C> {
    let n = f.len().max(g.len());
    let at = |h: &[C], k: usize| h.get(k).cloned().unwrap_or_else(C::zero);
    trim((0..n).map(|k| at(f, k) + at(g, k)).collect())
}

pub fn scale<C: Coeff>(f: &[C], c: &C) -> Poly<C> {
    trim(f.iter().map(|a| a.clone() * c.clone()).collect())
}

pub fn sub<C: Coeff>(f: &[C], g: &[C]) -> Poly<C> {
    add(f, &scale(g, &-C::one()))
}

pub fn times_x<C: Coeff>(f: &[C], i: u32) -> Poly<C> {
    if f.is_empty() {
        return Vec::new();
    }
    let mut out = vec![C::zero(); i as usize];
    out.extend(f.iter().cloned());
    out
}

pub fn deriv<C: Coeff>(f: &[C], j: u32) -> Poly<C> {
    let mut g = f.to_vec();
    for _ in 0..j {
        g = g
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * C::from_i64(k as i64))
            .collect();
    }
    trim(g)
}

/// `sum c x^i (d/dx)^j f`.
pub fn act<C: Coeff>(p: &WeylOp<C>, f: &[C]) -> Poly<C> {
    let mut out = Vec::new();
    for (m, c) in p.terms() {
        out = add(&out, &scale(&times_x(&deriv(f, m.j), m.i), c));
    }
    out
}

/// Whether the map kills `x^0 ..= x^bound`.
pub fn kills<C: Coeff>(bound: u32, op: impl Fn(&[C]) -> Poly<C>) -> bool {
    (0..=bound as usize).all(|n| op(&x_pow::<C>(n)).is_empty())
}

pub fn ord_of<C: Coeff>(p: &WeylOp<C>) -> u32 {
    p.terms().map(|(m, _)| m.j).max().unwrap_or(0)
}

pub fn ordx_of<C: Coeff>(p: &WeylOp<C>) -> u32 {
    p.terms().map(|(m, _)| m.i).max().unwrap_or(0)
}

/// `[P, Q] = 0`, decided by the action.
pub fn commute_by_action<C: Coeff>(p: &WeylOp<C>, q: &WeylOp<C>) -> bool {
    let bound = ord_of(p) + ord_of(q);
    kills(bound, |f| sub(&act(p, &act(q, f)), &act(q, &act(p, f))))
}

/// `lhs` and the operator built from the action `rhs` agree, given that
/// the difference has order at most `bound`.
pub fn same_action<C: Coeff>(lhs: &WeylOp<C>, bound: u32, rhs: impl Fn(&[C]) -> Poly<C>) -> bool {
    kills(bound, |f| sub(&act(lhs, f), &rhs(f)))
}

/// `f(P, Q)` with `X^i Y^j -> P^i Q^j`, applied to a polynomial.
pub fn eval_relation<C: Coeff>(rel: &BiPoly<C>, p: &WeylOp<C>, q: &WeylOp<C>, f: &[C]) -> Poly<C> {
    let mut out = Vec::new();
    for (&(i, j), c) in rel.terms() {
        let mut g = f.to_vec();
        for _ in 0..j {
            g = act(q, &g);
        }
        for _ in 0..i {
            g = act(p, &g);
        }
        out = add(&out, &scale(&g, c));
    }
    out
}

pub fn relation_holds<C: Coeff>(rel: &BiPoly<C>, p: &WeylOp<C>, q: &WeylOp<C>) -> bool {
    let (dx, dy) = rel.degrees();
    let bound = dx * ord_of(p) + dy * ord_of(q);
    kills(bound, |f| eval_relation(rel, p, q, f))
}

/// The image under a generator of an operator, as an action:
/// `sum c img_x^i img_d^j`.
pub fn gen_images(g: &TameGen) -> (WeylOp<Rational>, WeylOp<Rational>) {
    match g {
        TameGen::Phi { n, lambda } => (
            WeylOp::d(),
            WeylOp::from_terms([(1, 0, int(1)), (0, *n, lambda.clone())]),
        ),
        TameGen::PhiP { n, lambda } => (
            WeylOp::from_terms([(0, 1, int(1)), (*n, 0, lambda.clone())]),
            WeylOp::x(),
        ),
        TameGen::Lin { a, b, c, d } => (
            WeylOp::from_terms([(0, 1, a.clone()), (1, 0, b.clone())]),
            WeylOp::from_terms([(0, 1, c.clone()), (1, 0, d.clone())]),
        ),
    }
}

pub fn substituted_action<C: Coeff>(p: &WeylOp<C>, img_d: &WeylOp<C>, img_x: &WeylOp<C>, f: &[C]) -> Poly<C> {
    let mut out = Vec::new();
    for (m, c) in p.terms() {
        let mut g = f.to_vec();
        for _ in 0..m.j {
            g = act(img_d, &g);
        }
        for _ in 0..m.i {
            g = act(img_x, &g);
        }
        out = add(&out, &scale(&g, c));
    }
    out
}

/// Order bound for `sum c img_x^i img_d^j`.
pub fn substituted_ord<C: Coeff>(p: &WeylOp<C>, img_d: &WeylOp<C>, img_x: &WeylOp<C>) -> u32 {
    let (od, ox) = (ord_of(img_d), ord_of(img_x));
    p.terms().map(|(m, _)| m.i * ox + m.j * od).max().unwrap_or(0)
}

/// Commutative polynomial in `x, y` as a sparse map without zeros.
pub type Comm<C> = BTreeMap<(u32, u32), C>;

pub fn comm_of<C: Coeff>(p: &WeylOp<C>) -> Comm<C> {
    p.terms().map(|(m, c)| ((m.i, m.j), c.clone())).collect()
}

pub fn comm_of_bipoly<C: Coeff>(f: &BiPoly<C>) -> Comm<C> {
    f.terms().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (*k, c.clone())).collect()
}

fn comm_add_term<C: Coeff>(f: &mut Comm<C>, k: (u32, u32), c: C) {
    let v = f.remove(&k).unwrap_or_else(C::zero) + c;
    if !v.is_zero() {
        f.insert(k, v);
    }
}

/// `f_x g_y - f_y g_x`, by the product rule on monomials.
pub fn poisson_oracle<C: Coeff>(f: &Comm<C>, g: &Comm<C>) -> Comm<C> {
    let mut out = Comm::new();
    for (&(a, b), c) in f {
        for (&(u, v), e) in g {
            let k = a as i64 * v as i64 - b as i64 * u as i64;
            if k != 0 && a + u >= 1 && b + v >= 1 {
                comm_add_term(&mut out, (a + u - 1, b + v - 1), c.clone() * e.clone() * C::from_i64(k));
            }
        }
    }
    out
}

pub fn comm_neg<C: Coeff>(f: &Comm<C>) -> Comm<C> {
    f.iter().map(|(k, c)| (*k, -c.clone())).collect()
}

pub fn weight(sigma: i64, rho: i64, (i, j): (u32, u32)) -> i64 {
    sigma * i as i64 + rho * j as i64
}

pub fn weight_deg<C: Coeff>(p: &WeylOp<C>, sigma: i64, rho: i64) -> Option<i64> {
    p.terms().map(|(m, _)| weight(sigma, rho, (m.i, m.j))).max()
}

/// Weight-maximal terms as a commutative polynomial.
pub fn top_oracle<C: Coeff>(p: &WeylOp<C>, sigma: i64, rho: i64) -> Comm<C> {
    let Some(v) = weight_deg(p, sigma, rho) else {
        return Comm::new();
    };
    p.terms()
        .filter(|(m, _)| weight(sigma, rho, (m.i, m.j)) == v)
        .map(|(m, c)| ((m.i, m.j), c.clone()))
        .collect()
}

pub fn nonzero_int(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    loop {
        let c = rng.gen_range(-bound..=bound);
        if c != 0 {
            return c;
        }
    }
}

/// Random operator with `terms` distinct monomials, exponents `<= e`.
pub fn random_op(rng: &mut ChaCha8Rng, terms: usize, e: u32, cbound: i64) -> WeylOp<Rational> {
    let mut support = BTreeMap::new();
    while support.len() < terms {
        support.insert((rng.gen_range(0..=e), rng.gen_range(0..=e)), int(nonzero_int(rng, cbound)));
    }
    WeylOp::from_terms(support.into_iter().map(|((i, j), c)| (i, j, c)))
}

/// Rank over a field by elimination, for independent dimension counts.
pub fn rank_oracle(mut rows: Vec<Vec<Rational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&k| !rows[k][col].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = Rational::one() / rows[r][col].clone();
        let pivot_row: Vec<Rational> = rows[r].iter().map(|c| c * &inv).collect();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (a, b) in row.iter_mut().zip(&pivot_row) {
                    *a -= &f * b;
                }
            }
        }
        rows[r] = pivot_row;
        r += 1;
    }
    r
}
