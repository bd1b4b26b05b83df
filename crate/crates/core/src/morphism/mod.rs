//! Substitutions `D -> P, x -> Q` and the tame generators of `Aut(A1)`.
//!
//! A substitution acts on normal forms by `x^i D^j -> Q^i P^j`. It is an
//! algebra endomorphism exactly when `[P, Q] = 1`; substitutions that fail
//! this are still allowed (uncertified) so weight formulas can be exercised
//! on monomial-top maps that are not endomorphisms.

mod rates;
mod rectangular;

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::polygon::{is_rectangular, PolygonError};
use crate::scalars::{parse_rational, Coeff, Rational};
use crate::weyl::WeylOp;

pub use rates::{
    epsilon_rate, iterated_tops, propagation_weight, reduce_by_power, weight_propagation_check,
    IteratedTop, Propagation,
};
pub use rectangular::{rectangularize, Mode, RectOutcome, RectStatus, StepLog};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("cannot parse tame word: {0}")]
    BadWord(String),
    #[error("linear generator needs ad - bc = 1, got {0}")]
    BadDeterminant(Rational),
    #[error("top of {0} is not a monomial")]
    NonMonomialTop(&'static str),
    #[error("monomial tops {0:?} and {1:?} are not proportional")]
    NonProportionalTops((u32, u32), (u32, u32)),
    #[error("monomial top {0:?} needs both exponents >= 1")]
    DegenerateTop((u32, u32)),
    #[error("weight {0} is not of the form (p*eps, p) for a positive integer p")]
    BadWeight(String),
    #[error("operator is a constant")]
    ConstantOperator,
    #[error("degree ratio {0} is not a non-negative integer")]
    NotIntegral(Rational),
    #[error("tops are not proportional powers")]
    NotProportional,
    #[error("no coefficient-ring scalar cancels the top")]
    NoCancelingBeta,
    #[error("no tame move applies to the current polygon")]
    NoApplicableMove,
    #[error("image of D is rectangular but the image of x is not")]
    XImageNotRectangular,
    #[error("certified endomorphism with rectangular D-image and non-rectangular x-image")]
    Lemma6Violation,
    #[error("polygon measure did not decrease ({before} -> {after})")]
    MeasureNotDecreasing { before: u64, after: u64 },
    #[error(transparent)]
    Polygon(#[from] PolygonError),
}

impl MorphismError {
    pub fn name(&self) -> &'static str {
        match self {
            MorphismError::BadWord(_) => "BadWord",
            MorphismError::BadDeterminant(_) => "BadDeterminant",
            MorphismError::NonMonomialTop(_) => "NonMonomialTop",
            MorphismError::NonProportionalTops(..) => "NonProportionalTops",
            MorphismError::DegenerateTop(_) => "DegenerateTop",
            MorphismError::BadWeight(_) => "BadWeight",
            MorphismError::ConstantOperator => "ConstantOperator",
            MorphismError::NotIntegral(_) => "NotIntegral",
            MorphismError::NotProportional => "NotProportional",
            MorphismError::NoCancelingBeta => "NoCancelingBeta",
            MorphismError::NoApplicableMove => "NoApplicableMove",
            MorphismError::XImageNotRectangular => "XImageNotRectangular",
            MorphismError::Lemma6Violation => "Lemma6Violation",
            MorphismError::MeasureNotDecreasing { .. } => "MeasureNotDecreasing",
            MorphismError::Polygon(e) => e.name(),
        }
    }
}

/// The pair of images `(img_d, img_x)` of `D` and `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution<C: Coeff> {
    pub img_d: WeylOp<C>,
    pub img_x: WeylOp<C>,
    pub endo_certified: bool,
}

impl<C: Coeff> Substitution<C> {
    /// Uncertified substitution; see [`Substitution::certify`].
    pub fn new(img_d: WeylOp<C>, img_x: WeylOp<C>) -> Self {
        Substitution {
            img_d,
            img_x,
            endo_certified: false,
        }
    }

    pub fn identity() -> Self {
        Substitution {
            img_d: WeylOp::d(),
            img_x: WeylOp::x(),
            endo_certified: true,
        }
    }

    /// `[img_d, img_x] = 1`.
    pub fn is_endomorphism(&self) -> bool {
        self.img_d.commutator(&self.img_x).is_one()
    }

    /// Rechecks the commutation relation and records the verdict.
    pub fn certify(mut self) -> Self {
        self.endo_certified = self.is_endomorphism();
        self
    }

    /// `x^i D^j -> img_x^i img_d^j`, evaluated by Horner's rule in `img_x`.
    pub fn apply(&self, p: &WeylOp<C>) -> WeylOp<C> {
        if p.is_zero() {
            return WeylOp::zero();
        }
        let (ox, od) = (p.ord_x().unwrap_or(0), p.ord().unwrap_or(0));
        let mut dpow = vec![WeylOp::one()];
        for j in 0..od as usize {
            dpow.push(&dpow[j] * &self.img_d);
        }
        let row = |i: u32| {
            let mut acc = WeylOp::zero();
            for (m, c) in p.terms().filter(|(m, _)| m.i == i) {
                acc.add_scaled(&dpow[m.j as usize], c);
            }
            acc
        };
        let mut acc = row(ox);
        for i in (0..ox).rev() {
            acc = &(&self.img_x * &acc) + &row(i);
        }
        acc
    }

    /// `self o other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Self) -> Self {
        Substitution {
            img_d: self.apply(&other.img_d),
            img_x: self.apply(&other.img_x),
            endo_certified: self.endo_certified && other.endo_certified,
        }
    }
}

impl<C: Coeff> fmt::Display for Substitution<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D -> {}; x -> {}", self.img_d, self.img_x)
    }
}

/// Elementary automorphisms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TameGen {
    /// `x -> x + lambda D^n`, `D -> D`.
    Phi { n: u32, lambda: Rational },
    /// `D -> D + lambda x^n`, `x -> x`.
    PhiP { n: u32, lambda: Rational },
    /// `D -> a D + b x`, `x -> c D + d x` with `ad - bc = 1`.
    Lin {
        a: Rational,
        b: Rational,
        c: Rational,
        d: Rational,
    },
}

impl TameGen {
    pub fn phi(n: u32, lambda: Rational) -> Self {
        TameGen::Phi { n, lambda }
    }

    pub fn phi_p(n: u32, lambda: Rational) -> Self {
        TameGen::PhiP { n, lambda }
    }

    pub fn lin(a: Rational, b: Rational, c: Rational, d: Rational) -> Result<Self, MorphismError> {
        let det = &a * &d - &b * &c;
        if !det.is_one() {
            return Err(MorphismError::BadDeterminant(det));
        }
        Ok(TameGen::Lin { a, b, c, d })
    }

    pub fn inverse(&self) -> Self {
        match self {
            TameGen::Phi { n, lambda } => TameGen::phi(*n, -lambda.clone()),
            TameGen::PhiP { n, lambda } => TameGen::phi_p(*n, -lambda.clone()),
            TameGen::Lin { a, b, c, d } => TameGen::Lin {
                a: d.clone(),
                b: -b.clone(),
                c: -c.clone(),
                d: a.clone(),
            },
        }
    }

    pub fn substitution<C: Coeff>(&self) -> Substitution<C> {
        let r = |q: &Rational| C::from_rational(q.clone());
        let (img_d, img_x) = match self {
            TameGen::Phi { n, lambda } => (
                WeylOp::d(),
                &WeylOp::x() + &WeylOp::monomial(r(lambda), 0, *n),
            ),
            TameGen::PhiP { n, lambda } => (
                &WeylOp::d() + &WeylOp::monomial(r(lambda), *n, 0),
                WeylOp::x(),
            ),
            TameGen::Lin { a, b, c, d } => (
                WeylOp::from_terms([(0, 1, r(a)), (1, 0, r(b))]),
                WeylOp::from_terms([(0, 1, r(c)), (1, 0, r(d))]),
            ),
        };
        Substitution {
            img_d,
            img_x,
            endo_certified: true,
        }
    }

    /// Applies the generator to an operator. The two triangular generators
    /// use `(x + l D^n)^i` resp. `(D + l x^n)^j` built incrementally.
    pub fn apply<C: Coeff>(&self, p: &WeylOp<C>) -> WeylOp<C> {
        if p.is_zero() {
            return WeylOp::zero();
        }
        let sub = self.substitution::<C>();
        match self {
            TameGen::Phi { .. } => {
                let mut out = WeylOp::zero();
                let mut pow = WeylOp::one();
                for i in 0..=p.ord_x().unwrap_or(0) {
                    if i > 0 {
                        pow = &pow * &sub.img_x;
                    }
                    let row = WeylOp::from_terms(
                        p.terms()
                            .filter(|(m, _)| m.i == i)
                            .map(|(m, c)| (0, m.j, c.clone())),
                    );
                    if !row.is_zero() {
                        out = &out + &(&pow * &row);
                    }
                }
                out
            }
            TameGen::PhiP { .. } => {
                let mut out = WeylOp::zero();
                let mut pow = WeylOp::one();
                for j in 0..=p.ord().unwrap_or(0) {
                    if j > 0 {
                        pow = &pow * &sub.img_d;
                    }
                    let col = WeylOp::from_terms(
                        p.terms()
                            .filter(|(m, _)| m.j == j)
                            .map(|(m, c)| (m.i, 0, c.clone())),
                    );
                    if !col.is_zero() {
                        out = &out + &(&col * &pow);
                    }
                }
                out
            }
            TameGen::Lin { .. } => sub.apply(p),
        }
    }
}

impl fmt::Display for TameGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TameGen::Phi { n, lambda } => write!(f, "Phi({n},{lambda})"),
            TameGen::PhiP { n, lambda } => write!(f, "PhiP({n},{lambda})"),
            TameGen::Lin { a, b, c, d } => write!(f, "Lin({a},{b},{c},{d})"),
        }
    }
}

impl FromStr for TameGen {
    type Err = MorphismError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || MorphismError::BadWord(s.trim().to_string());
        let t = s.trim();
        let open = t.find('(').ok_or_else(bad)?;
        let inner = t[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        let args: Vec<&str> = inner.split(',').map(str::trim).collect();
        let rat = |a: &str| parse_rational(a).map_err(|_| bad());
        let nat = |a: &str| a.parse::<u32>().map_err(|_| bad());
        match (t[..open].trim(), args.as_slice()) {
            ("Phi", [n, l]) => Ok(TameGen::phi(nat(n)?, rat(l)?)),
            ("PhiP", [n, l]) => Ok(TameGen::phi_p(nat(n)?, rat(l)?)),
            ("Lin", [a, b, c, d]) => TameGen::lin(rat(a)?, rat(b)?, rat(c)?, rat(d)?),
            _ => Err(bad()),
        }
    }
}

/// Generators applied left to right: `[g1, g2]` is the map `g2 o g1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TameWord(pub Vec<TameGen>);

impl TameWord {
    pub fn to_sub<C: Coeff>(&self) -> Substitution<C> {
        self.0.iter().fold(Substitution::identity(), |s, g| Substitution {
            img_d: g.apply(&s.img_d),
            img_x: g.apply(&s.img_x),
            endo_certified: true,
        })
    }

    /// Image of an operator under the automorphism.
    pub fn apply<C: Coeff>(&self, p: &WeylOp<C>) -> WeylOp<C> {
        self.0.iter().fold(p.clone(), |acc, g| g.apply(&acc))
    }

    pub fn inverse(&self) -> Self {
        TameWord(self.0.iter().rev().map(TameGen::inverse).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for TameWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, g) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(";")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

impl FromStr for TameWord {
    type Err = MorphismError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split(';')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(TameGen::from_str)
            .collect::<Result<Vec<_>, _>>()
            .map(TameWord)
    }
}

pub fn word_to_sub<C: Coeff>(w: &TameWord) -> Substitution<C> {
    w.to_sub()
}

pub fn word_inverse(w: &TameWord) -> TameWord {
    w.inverse()
}

/// Shape facts about the image of `D` under an automorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolygonReport {
    /// Largest `x`-exponent in the support.
    pub m: u32,
    /// Largest `D`-exponent in the support.
    pub n: u32,
    pub axis_points: bool,
    pub extremal_clean: bool,
    pub divisible: bool,
    pub rectangular: bool,
}

impl PolygonReport {
    pub fn passes(&self) -> bool {
        self.axis_points && self.extremal_clean && self.divisible && !self.rectangular
    }

    pub fn violations(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if !self.axis_points {
            v.push("axis points (0,n),(m,0) missing");
        }
        if !self.extremal_clean {
            v.push("extra point on the top row or right column");
        }
        if !self.divisible {
            v.push("neither m|n nor n|m");
        }
        if self.rectangular {
            v.push("rectangular type");
        }
        v
    }
}

fn divides(a: u32, b: u32) -> bool {
    b == 0 || (a != 0 && b.is_multiple_of(a))
}

/// Checks the support of `Phi(D)` for an automorphism `Phi`: both axis
/// points `(0,n)`, `(m,0)` present, nothing else on the row `j = n` or the
/// column `i = m`, `m | n` or `n | m`, and not of rectangular type. When
/// `m = 0` (resp. `n = 0`) the conditions involving `(m,0)` (resp. `(0,n)`)
/// are vacuous.
pub fn automorphism_polygon_check(w: &TameWord) -> PolygonReport {
    polygon_report(&w.apply(&WeylOp::<Rational>::d()))
}

pub fn polygon_report<C: Coeff>(img: &WeylOp<C>) -> PolygonReport {
    let m = img.ord_x().unwrap_or(0);
    let n = img.ord().unwrap_or(0);
    let has = |i, j| !img.coeff(i, j).is_zero();
    let axis_points = (n == 0 || has(0, n)) && (m == 0 || has(m, 0));
    let extremal_clean = img.terms().all(|(p, _)| {
        let on_top = n > 0 && p.j == n && p.i > 0;
        let on_right = m > 0 && p.i == m && p.j > 0;
        !(on_top || on_right)
    });
    PolygonReport {
        m,
        n,
        axis_points,
        extremal_clean,
        divisible: divides(m, n) || divides(n, m),
        rectangular: is_rectangular(img).ok().flatten().is_some(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, rat};

    type Op = WeylOp<Rational>;

    fn t(terms: &[(u32, u32, i64)]) -> Op {
        Op::from_terms(terms.iter().map(|&(i, j, c)| (i, j, int(c))))
    }

    #[test]
    fn phi_prime_image_of_d() {
        let g = TameGen::phi_p(2, int(1));
        assert_eq!(g.apply(&Op::d()), t(&[(0, 1, 1), (2, 0, 1)]));
    }

    #[test]
    fn generator_certificates() {
        let s: Substitution<Rational> = TameGen::phi(2, int(1)).substitution();
        // [D, x + D^2] = 1
        assert_eq!(s.img_d.commutator(&s.img_x), Op::one());
        assert!(s.is_endomorphism());
        let bad = Substitution::new(t(&[(1, 1, 1)]), Op::x());
        assert!(!bad.is_endomorphism());
        assert_eq!(bad.img_d.commutator(&bad.img_x), Op::x());
        assert!(Substitution::<Rational>::identity().is_endomorphism());
        let cubic = Substitution::new(Op::d(), t(&[(1, 0, 1), (0, 3, 1)])).certify();
        assert!(cubic.endo_certified);
    }

    #[test]
    fn fast_generator_paths_match_substitution() {
        let p = t(&[(2, 3, 1), (1, 1, -2), (3, 0, 5), (0, 2, 1)]);
        for g in [
            TameGen::phi(2, int(3)),
            TameGen::phi_p(3, rat(-1, 2)),
            TameGen::lin(int(0), int(1), int(-1), int(0)).unwrap(),
        ] {
            assert_eq!(g.apply(&p), g.substitution::<Rational>().apply(&p), "{g}");
        }
    }

    #[test]
    fn inverse_word_restores_generators() {
        let w: TameWord = "Phi(2,1);PhiP(1,-3/2);Lin(2,1,1,1)".parse().unwrap();
        let s: Substitution<Rational> = w.to_sub();
        assert!(s.is_endomorphism());
        let back = w.inverse().to_sub::<Rational>().compose(&s);
        assert_eq!(back.img_d, Op::d());
        assert_eq!(back.img_x, Op::x());
    }

    #[test]
    fn word_text_round_trip() {
        let text = "Phi(2,1);PhiP(0,-1/3);Lin(1,0,5,1)";
        let w: TameWord = text.parse().unwrap();
        assert_eq!(w.to_string(), text);
        assert_eq!("".parse::<TameWord>().unwrap(), TameWord::default());
        assert!(matches!("Lin(1,1,1,1)".parse::<TameWord>(), Err(MorphismError::BadDeterminant(_))));
        assert!("Psi(1,1)".parse::<TameWord>().is_err());
    }

    #[test]
    fn word_order_is_left_to_right() {
        // PhiP(1,1) then Phi(2,1): D -> D + x -> D + (x + D^2)
        let w: TameWord = "PhiP(1,1);Phi(2,1)".parse().unwrap();
        assert_eq!(w.apply(&Op::d()), t(&[(0, 1, 1), (1, 0, 1), (0, 2, 1)]));
        assert_eq!(w.to_sub::<Rational>().img_d, w.apply(&Op::d()));
    }

    #[test]
    fn generator_polygon_reports() {
        let r = automorphism_polygon_check(&"Phi(2,1)".parse().unwrap());
        assert_eq!((r.m, r.n), (0, 1));
        assert!(r.passes());
        let r = automorphism_polygon_check(&"PhiP(1,1);Phi(2,1)".parse().unwrap());
        // D + x + D^2: m = 1, n = 2
        assert_eq!((r.m, r.n), (1, 2));
        assert!(r.passes(), "{:?}", r.violations());
        let rect = polygon_report(&t(&[(1, 1, 1), (1, 0, 1), (0, 1, 1)]));
        assert!(!rect.passes());
        assert!(rect.rectangular);
    }
}
