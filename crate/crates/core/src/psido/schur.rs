//! Schur normalization `S^-1 Q S = c D^q`.
//!
//! A monic `Q = D^q + a x-poly D^(q-1) + ...` is first gauged by `e^phi` with
//! `phi' = -a/q`, which turns `D` into `D + phi'` and clears the `D^(q-1)`
//! coefficient. The remaining factor `S1 = 1 + s1 Dinv + ...` is solved one
//! order at a time: the coefficient of `D^(q-1-k)` in `Q S1 - S1 D^q` is
//! `q sk' + r` with `r` depending on `s1..s(k-1)` only, so `sk = -(1/q) int r`.
//!
//! All conjugations are carried out on the gauged operators, which keeps
//! them exact; the series `e^phi` only enters the reported `S`.

use num_traits::{One, Zero};

use super::{PsiDO, PsidoError, XSeries};
use crate::morphism::Substitution;
use crate::scalars::{Coeff, Rational};
use crate::weyl::WeylOp;

#[derive(Debug, Clone, PartialEq)]
pub struct Schur<C: Coeff> {
    pub q: u32,
    pub n: u32,
    pub m: usize,
    pub c: Rational,
    /// `phi` with `S = e^phi S1`.
    pub phi: XSeries<C>,
    pub s1: PsiDO<C>,
    pub s: PsiDO<C>,
    /// `S^-1 Q S` on orders `>= q - 1 - n`.
    pub conj: PsiDO<C>,
    /// `S^-1 Q S - c D^q` on the same orders.
    pub residual: PsiDO<C>,
}

impl<C: Coeff> Schur<C> {
    /// Lowest order at which the conjugate is determined.
    pub fn order_floor(&self) -> i64 {
        self.q as i64 - 1 - self.n as i64
    }

    /// Coefficient of `Dinv^k` in `S`.
    pub fn s_coeff(&self, k: u32) -> XSeries<C> {
        self.s.coeff(-(k as i64))
    }

    pub fn residual_vanishes(&self) -> bool {
        self.residual.agrees_from(&PsiDO::zero(), self.order_floor()) == Some(true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Centralizer {
    Commutes,
    /// The conjugate has a nonconstant coefficient at this order.
    NotCommuting { order: i64 },
    Insufficient { first_undetermined: i64 },
}

/// `(q, c)` with `Q = c D^q + lower`.
fn order_and_lead<C: Coeff>(q: &WeylOp<C>) -> Result<(u32, Rational), PsidoError> {
    let ord = q.ord().map_err(|_| PsidoError::ZeroOperator)?;
    if ord == 0 {
        return Err(PsidoError::ZeroOrder);
    }
    let c = q
        .ht()
        .map_err(|_| PsidoError::ZeroOperator)?
        .as_constant()
        .and_then(|c| c.as_rational())
        .filter(|c| !c.is_zero())
        .ok_or(PsidoError::NonConstantLead)?;
    Ok((ord, c))
}

fn x_series<C: Coeff>(p: &WeylOp<C>) -> XSeries<C> {
    let deg = p.ord_x().unwrap_or(0) as usize;
    XSeries::poly((0..=deg).map(|i| p.coeff(i as u32, 0)).collect())
}

/// `phi'` clearing the `D^(q-1)` coefficient of a monic operator.
fn gauge_shift<C: Coeff>(monic: &WeylOp<C>, q: u32) -> WeylOp<C> {
    monic
        .coeff_of_dpow(q - 1)
        .scale_rational(&-Rational::new(1.into(), q.into()))
}

/// `e^-phi P e^phi`, i.e. `D -> D + phi'`.
fn gauged<C: Coeff>(p: &WeylOp<C>, shift: &WeylOp<C>) -> WeylOp<C> {
    if shift.is_zero() {
        return p.clone();
    }
    Substitution::new(&WeylOp::d() + shift, WeylOp::x()).apply(p)
}

/// `S1 = 1 + s1 Dinv + ... + sn Dinv^n` with `Q S1 = S1 D^q` through order `q - 1 - n`.
fn normalizer<C: Coeff>(qt: &PsiDO<C>, q: u32, n: u32) -> PsiDO<C> {
    let mut s = PsiDO::one();
    let inv_q = Rational::new((-1).into(), q.into());
    for k in 1..=n as i64 {
        let e = q as i64 - 1 - k;
        let r = &qt.product_coeff(&s, e) - &s.coeff(e - q as i64);
        let sk = r.integral().scale(&inv_q);
        s = &s + &PsiDO::new([(-k, sk)], None);
    }
    s
}

pub fn schur_normalize<C: Coeff>(q_op: &WeylOp<C>, n: u32, m: usize) -> Result<Schur<C>, PsidoError> {
    let (q, c) = order_and_lead(q_op)?;
    let monic = q_op.scale_rational(&c.recip());
    let shift = gauge_shift(&monic, q);
    let qt = PsiDO::from_op(&gauged(&monic, &shift));
    let s1 = normalizer(&qt, q, n);
    let phi = x_series(&shift).integral();
    let s = s1.mul_function(&phi.exp(m).expect("zero constant term"));
    let lo = q as i64 - 1 - n as i64;
    let s1inv = s1.inverse(-(n as i64) - 3, m)?;
    let conj = s1inv.mul(&qt.mul(&s1, lo), lo).truncate(lo).scale(&c);
    let target = PsiDO::d_pow(q as i64).scale(&c);
    let residual = (&conj - &target).truncate(lo);
    let out = Schur { q, n, m, c, phi, s1, s, conj, residual };
    if out.residual.agrees_from(&PsiDO::zero(), lo).is_none() {
        return Err(PsidoError::Insufficient { order: lo });
    }
    Ok(out)
}

/// `R = D + r0 + r1 Dinv + ...` with `R^q = Q` on orders `>= q - 1 - n`,
/// listed down to `Dinv^n`.
pub fn qth_root<C: Coeff>(q_op: &WeylOp<C>, n: u32, m: usize) -> Result<PsiDO<C>, PsidoError> {
    let (q, c) = order_and_lead(q_op)?;
    if !c.is_one() {
        return Err(PsidoError::NotMonic);
    }
    let lo = -(n as i64);
    let shift = gauge_shift(q_op, q);
    let qt = PsiDO::from_op(&gauged(q_op, &shift));
    let s1 = normalizer(&qt, q, n + 1);
    let s1inv = s1.inverse(lo - 4, m)?;
    let r1 = s1.mul(&PsiDO::d_pow(1), lo - 4).mul(&s1inv, lo).truncate(lo);
    if shift.is_zero() {
        return Ok(r1);
    }
    // e^phi (a D^j) e^-phi = a (D - phi')^j
    let g = &PsiDO::d_pow(1) - &PsiDO::function(x_series(&shift));
    let ginv = g.inverse(lo - 2, m)?;
    let mut out = PsiDO::zero().truncate(lo);
    for (&j, a) in r1.terms() {
        let pw = if j >= 0 { g.pow(j as u32, lo) } else { ginv.pow((-j) as u32, lo) };
        out = &out + &pw.mul_function(a);
    }
    Ok(out.truncate(lo))
}

/// Decides `[P, Q] = 0` from the constancy of the coefficients of `S^-1 P S`
/// on orders `1 - q ..= ord P`; those below `ord P - n` are treated as
/// undetermined.
pub fn centralizer_criterion<C: Coeff>(
    p: &WeylOp<C>,
    q_op: &WeylOp<C>,
    n: u32,
    m: usize,
) -> Result<Centralizer, PsidoError> {
    let (q, c) = order_and_lead(q_op)?;
    if p.is_zero() {
        return Ok(Centralizer::Commutes);
    }
    let monic = q_op.scale_rational(&c.recip());
    let shift = gauge_shift(&monic, q);
    let qt = PsiDO::from_op(&gauged(&monic, &shift));
    let pt = PsiDO::from_op(&gauged(p, &shift));
    let s1 = normalizer(&qt, q, n);
    let ord_p = p.ord().map_err(|_| PsidoError::ZeroOperator)? as i64;
    let det = ord_p - n as i64;
    let need = 1 - q as i64;
    let s1inv = s1.inverse(-(n as i64) - 2, m)?;
    let conj = s1inv.mul(&pt.mul(&s1, det - 2), det);
    for e in (det.max(need)..=ord_p).rev() {
        if conj.coeff(e).degree().is_some_and(|d| d > 0) {
            return Ok(Centralizer::NotCommuting { order: e });
        }
    }
    Ok(if det <= need {
        Centralizer::Commutes
    } else {
        Centralizer::Insufficient { first_undetermined: det - 1 }
    })
}
