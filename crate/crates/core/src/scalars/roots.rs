use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{ParamPoly, Rational};

const TRIAL_LIMIT: u64 = 1 << 20;

/// Prime factorization by trial division; a cofactor with no factor below
/// `TRIAL_LIMIT` is kept as a single (possibly composite) factor.
fn factor(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = 2u64;
    while p < TRIAL_LIMIT && BigInt::from(p * p) <= n {
        let bp = BigInt::from(p);
        let mut e = 0;
        while n.is_multiple_of(&bp) {
            n /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((bp, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut ds = vec![BigInt::one()];
    for (p, e) in factor(n) {
        let mut next = Vec::with_capacity(ds.len() * (e as usize + 1));
        for d in &ds {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        ds = next;
    }
    ds
}

/// Rational roots with multiplicities, ascending. The zero polynomial has
/// no well-defined root set and yields an empty list.
pub fn rational_roots(p: &ParamPoly) -> Vec<(Rational, u32)> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let scale = Rational::from_integer(p.denominator_lcm());
    let mut q = p.scale(&scale);
    let mut out = Vec::new();
    let zeros = q.coeffs().iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        out.push((Rational::zero(), zeros as u32));
        q = ParamPoly::from_coeffs(q.coeffs()[zeros..].to_vec());
    }
    let a0 = q.coeff(0).to_integer();
    let an = q.lead().to_integer();
    let mut cands: Vec<Rational> = Vec::new();
    let dens = divisors(&an);
    for u in divisors(&a0) {
        for v in &dens {
            let r = Rational::new(u.clone(), v.clone());
            cands.push(r.clone());
            cands.push(-r);
        }
    }
    cands.sort();
    cands.dedup();
    for r in cands {
        let lin = ParamPoly::from_coeffs(vec![-r.clone(), Rational::one()]);
        let mut mult = 0;
        while let Ok(next) = q.div_exact(&lin) {
            q = next;
            mult += 1;
        }
        if mult > 0 {
            out.push((r, mult));
        }
        if q.degree().unwrap_or(0) == 0 {
            break;
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, rat};

    fn p(c: &[i64]) -> ParamPoly {
        ParamPoly::from_coeffs(c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn perfect_square() {
        // (c + 1)^2
        assert_eq!(rational_roots(&p(&[1, 2, 1])), vec![(int(-1), 2)]);
    }

    #[test]
    fn mixed_roots() {
        // (2c - 1)(c + 3) c = 2c^3 + 5c^2 - 3c
        assert_eq!(
            rational_roots(&p(&[0, -3, 5, 2])),
            vec![(int(-3), 1), (int(0), 1), (rat(1, 2), 1)]
        );
    }

    #[test]
    fn irrational_roots_are_absent() {
        assert!(rational_roots(&p(&[-2, 0, 1])).is_empty());
        assert!(rational_roots(&p(&[5])).is_empty());
    }

    #[test]
    fn divisors_of_composites() {
        let mut d = divisors(&BigInt::from(12));
        d.sort();
        assert_eq!(d, [1, 2, 3, 4, 6, 12].map(BigInt::from).to_vec());
    }
}
