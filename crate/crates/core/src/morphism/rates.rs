use num_traits::{Signed, Zero};

use super::{MorphismError, Substitution};
use crate::polygon::{hom_part, proportional_powers, weight_degree, WeightVec};
use crate::scalars::{Coeff, Rational};
use crate::weyl::WeylOp;

fn monomial_top<C: Coeff>(
    p: &WeylOp<C>,
    w: &WeightVec,
    what: &'static str,
) -> Result<(u32, u32), MorphismError> {
    hom_part(p, w)?
        .as_monomial()
        .map(|(e, _)| e)
        .ok_or(MorphismError::NonMonomialTop(what))
}

fn q(n: u32) -> Rational {
    Rational::from_integer(n.into())
}

/// The rate `eps` with `(l', k') = eps (l, k)`, where `x^l D^k` and
/// `x^l' D^k'` are the `w`-tops of the images of `D` and `x`.
pub fn epsilon_rate<C: Coeff>(s: &Substitution<C>, w: &WeightVec) -> Result<Rational, MorphismError> {
    let (l, k) = monomial_top(&s.img_d, w, "image of D")?;
    let (l2, k2) = monomial_top(&s.img_x, w, "image of x")?;
    if l == 0 || k == 0 {
        return Err(MorphismError::DegenerateTop((l, k)));
    }
    if l2 as u64 * k as u64 != k2 as u64 * l as u64 {
        return Err(MorphismError::NonProportionalTops((l, k), (l2, k2)));
    }
    if l2 == 0 {
        return Err(MorphismError::DegenerateTop((l2, k2)));
    }
    Ok(Rational::new(l2.into(), l.into()))
}

/// `(p eps, p)` for the least positive integer `p` making both entries integral.
pub fn propagation_weight(eps: &Rational) -> Result<WeightVec, MorphismError> {
    if !eps.is_positive() {
        return Err(MorphismError::BadWeight(format!("eps = {eps}")));
    }
    Ok(WeightVec::new(
        Rational::from_integer(eps.numer().clone()),
        Rational::from_integer(eps.denom().clone()),
    )?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Propagation {
    pub eps: Rational,
    /// `k + eps l`.
    pub factor: Rational,
    pub predicted: Rational,
    pub actual: Rational,
    pub image_monomial_top: bool,
}

impl Propagation {
    pub fn holds(&self) -> bool {
        self.predicted == self.actual && self.image_monomial_top
    }
}

/// Compares `v_w(s(P))` with `(k + eps l) v_w(P)`.
pub fn weight_propagation_check<C: Coeff>(
    s: &Substitution<C>,
    p: &WeylOp<C>,
    w: &WeightVec,
) -> Result<Propagation, MorphismError> {
    let eps = epsilon_rate(s, w)?;
    let pw = &w.rho;
    if !pw.is_positive() || !pw.is_integer() || w.sigma != pw * &eps {
        return Err(MorphismError::BadWeight(w.to_string()));
    }
    if p.as_constant().is_some() {
        return Err(MorphismError::ConstantOperator);
    }
    monomial_top(p, w, "P")?;
    let (l, k) = monomial_top(&s.img_d, w, "image of D")?;
    let factor = q(k) + &eps * q(l);
    let image = s.apply(p);
    let image_monomial_top = !image.is_zero() && hom_part(&image, w)?.len() == 1;
    let actual = if image.is_zero() {
        Rational::zero()
    } else {
        weight_degree(&image, w)?
    };
    Ok(Propagation {
        predicted: &factor * weight_degree(p, w)?,
        eps,
        factor,
        actual,
        image_monomial_top,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IteratedTop {
    pub q: u32,
    pub predicted: (u32, u32),
    /// `None` when the top of `s^q(D)` is not a monomial.
    pub actual: Option<(u32, u32)>,
}

/// Tops of `s^q(D)` for `q = 1..=q_max` against
/// `x^(l (k + eps l)^(q-1)) D^(k (k + eps l)^(q-1))`.
pub fn iterated_tops<C: Coeff>(
    s: &Substitution<C>,
    w: &WeightVec,
    q_max: u32,
) -> Result<Vec<IteratedTop>, MorphismError> {
    let eps = epsilon_rate(s, w)?;
    let (l, k) = monomial_top(&s.img_d, w, "image of D")?;
    let (l2, _) = monomial_top(&s.img_x, w, "image of x")?;
    debug_assert_eq!(q(l2), &eps * q(l));
    let factor = k + l2;
    let mut out = Vec::new();
    let mut cur = s.clone();
    for step in 1..=q_max {
        if step > 1 {
            cur = s.compose(&cur);
        }
        let f = factor.pow(step - 1);
        let actual = hom_part(&cur.img_d, w)?.as_monomial().map(|(e, _)| e);
        out.push(IteratedTop {
            q: step,
            predicted: (l * f, k * f),
            actual,
        });
    }
    Ok(out)
}

/// Replaces `img_x` by `img_x - beta img_d^e` where `e = v_w(img_x) / v_w(img_d)`
/// and `beta` cancels the `w`-top. Returns the new substitution, `beta`, `e`.
pub fn reduce_by_power<C: Coeff>(
    s: &Substitution<C>,
    w: &WeightVec,
) -> Result<(Substitution<C>, C, u32), MorphismError> {
    let v = weight_degree(&s.img_d, w)?;
    let vx = weight_degree(&s.img_x, w)?;
    if !v.is_positive() {
        return Err(MorphismError::NotProportional);
    }
    let ratio = &vx / &v;
    if ratio.is_negative() || !ratio.is_integer() {
        return Err(MorphismError::NotIntegral(ratio));
    }
    let e: u32 = ratio
        .to_integer()
        .try_into()
        .map_err(|_| MorphismError::NotIntegral(ratio.clone()))?;
    let f = hom_part(&s.img_d, w)?;
    let g = hom_part(&s.img_x, w)?;
    if proportional_powers(&f, &g, 1, e)?.is_none() {
        return Err(MorphismError::NotProportional);
    }
    let fe = f.pow(e);
    let (key, lf) = fe.terms().next().map(|(k, c)| (*k, c.clone())).expect("nonzero");
    let beta = g
        .coeff(key.0, key.1)
        .try_div(&lf)
        .ok_or(MorphismError::NoCancelingBeta)?;
    let mut img_x = s.img_x.clone();
    img_x.add_scaled(&s.img_d.pow(e), &-beta.clone());
    let out = Substitution {
        img_d: s.img_d.clone(),
        img_x,
        endo_certified: s.endo_certified,
    };
    Ok((out, beta, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, rat};
    use num_traits::One;

    type Op = WeylOp<Rational>;

    fn t(terms: &[(u32, u32, i64)]) -> Op {
        Op::from_terms(terms.iter().map(|&(i, j, c)| (i, j, int(c))))
    }

    fn w(s: i64, r: i64) -> WeightVec {
        WeightVec::int(s, r).unwrap()
    }

    #[test]
    fn rates_from_monomial_tops() {
        let s = Substitution::new(t(&[(2, 4, 1)]), t(&[(1, 2, 1)]));
        assert_eq!(epsilon_rate(&s, &w(1, 1)).unwrap(), rat(1, 2));
        let s = Substitution::new(t(&[(1, 2, 1)]), t(&[(2, 4, 1)]));
        assert_eq!(epsilon_rate(&s, &w(1, 1)).unwrap(), int(2));
        let s = Substitution::new(t(&[(1, 2, 1)]), t(&[(2, 3, 1)]));
        assert_eq!(
            epsilon_rate(&s, &w(1, 1)),
            Err(MorphismError::NonProportionalTops((1, 2), (2, 3)))
        );
        let s = Substitution::new(t(&[(1, 2, 1), (2, 1, 1)]), t(&[(2, 4, 1)]));
        assert_eq!(epsilon_rate(&s, &w(1, 1)), Err(MorphismError::NonMonomialTop("image of D")));
    }

    #[test]
    fn least_integral_weight() {
        assert_eq!(propagation_weight(&int(2)).unwrap(), w(2, 1));
        assert_eq!(propagation_weight(&rat(2, 3)).unwrap(), w(2, 3));
        assert!(propagation_weight(&int(0)).is_err());
    }

    #[test]
    fn propagation_example() {
        // D -> x D^2, x -> x^2 D^4, eps = 2, w = (2, 1), P = x D
        let s = Substitution::new(t(&[(1, 2, 1)]), t(&[(2, 4, 1)]));
        let r = weight_propagation_check(&s, &t(&[(1, 1, 1)]), &w(2, 1)).unwrap();
        assert_eq!(r.eps, int(2));
        assert_eq!(r.factor, int(4));
        assert_eq!(r.predicted, int(12));
        assert_eq!(r.actual, int(12));
        assert!(r.holds());
        assert_eq!(
            weight_propagation_check(&s, &Op::one(), &w(2, 1)),
            Err(MorphismError::ConstantOperator)
        );
        assert!(matches!(
            weight_propagation_check(&s, &t(&[(1, 1, 1)]), &w(1, 1)),
            Err(MorphismError::BadWeight(_))
        ));
    }

    #[test]
    fn iterated_top_formula() {
        let s = Substitution::new(t(&[(1, 2, 1), (0, 1, 3)]), t(&[(2, 4, 1), (1, 0, -1)]));
        for it in iterated_tops(&s, &w(2, 1), 3).unwrap() {
            assert_eq!(it.actual, Some(it.predicted), "q = {}", it.q);
        }
    }

    #[test]
    fn reduce_visible_power() {
        let s = Substitution::new(Op::d(), t(&[(1, 0, 1), (0, 3, 2)]));
        let (r, beta, e) = reduce_by_power(&s, &w(1, 1)).unwrap();
        assert_eq!((r.img_d, r.img_x, beta, e), (Op::d(), Op::x(), int(2), 3));
    }

    #[test]
    fn reduce_square() {
        let s = Substitution::new(t(&[(0, 2, 1)]), t(&[(1, 1, 1), (0, 4, 1)]));
        let (r, beta, e) = reduce_by_power(&s, &w(1, 1)).unwrap();
        assert_eq!((beta, e), (int(1), 2));
        assert_eq!(r.img_x, t(&[(1, 1, 1)]));
    }

    #[test]
    fn reduce_refuses_unrelated_tops() {
        let s = Substitution::new(Op::d(), Op::x());
        assert_eq!(reduce_by_power(&s, &w(1, 1)), Err(MorphismError::NotProportional));
        let s = Substitution::new(t(&[(0, 2, 1)]), t(&[(0, 3, 1)]));
        assert_eq!(reduce_by_power(&s, &w(1, 1)), Err(MorphismError::NotIntegral(rat(3, 2))));
    }
}
