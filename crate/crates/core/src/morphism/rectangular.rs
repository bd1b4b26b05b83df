//! Driving a substitution to rectangular type with tame moves.
//!
//! Write `l` for the largest `x`-exponent and `k` for the largest
//! `D`-exponent of an image. The image is rectangular when `(l, k)` is in
//! its support. Otherwise let `A = (I, k)` be the rightmost point of the top
//! row and `B = (l, J)` the highest point of the right column.
//!
//! * If `J = 0`, take the hull edge leaving `B` counterclockwise, with
//!   reduced outward normal `(s, r)`. When `s | r`, the move
//!   `D -> D + c x^(r/s)` rewrites the edge polynomial so that the
//!   coefficient of `x^l` becomes `p(c) = sum_j a_(l - ej, j) c^j`; a root
//!   of `p` lowers `l` and never raises `k`.
//! * If `I = 0`, symmetrically with the edge arriving at `A`, the move
//!   `x -> x + c D^(s/r)` kills `D^k` when `c` is a root of
//!   `sum_i a_(i, k - ei) c^i`; it lowers `k` and never raises `l`.
//!
//! So `l + k` drops at every step. Only rational roots are used; if the
//! available edge polynomials have none the run stops with
//! [`RectStatus::IrrationalRoot`].

use std::fmt;

use num_integer::Integer;
use num_traits::Zero;

use super::{MorphismError, Substitution, TameGen, TameWord};
use crate::polygon::{is_rectangular, newton_polygon};
use crate::scalars::{rational_roots, Coeff, ParamPoly, Rational};
use crate::weyl::WeylOp;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// `s <- g o s`.
    Compose,
    /// `s <- g o s o g^-1`.
    Conjugate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RectStatus {
    Rectangular,
    /// The image being reduced became a polynomial in one variable.
    TameExhausted,
    StepLimit,
    IrrationalRoot,
}

impl fmt::Display for RectStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RectStatus::Rectangular => "Rectangular",
            RectStatus::TameExhausted => "TameExhausted",
            RectStatus::StepLimit => "StepLimit",
            RectStatus::IrrationalRoot => "IrrationalRoot",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepLog {
    /// Shape label: `1`/`2` for a single axis point, `3` when both axis
    /// points are present with a vertex between them, `4b`/`4c`/`4d` when
    /// the edge joins the two axis points (by `s > r`, `s < r`, `s = r`);
    /// `I`/`II` in conjugation mode.
    pub case: String,
    pub sigma: u32,
    pub rho: u32,
    pub generator: TameGen,
    pub mu: Rational,
    pub measure_before: u64,
    pub measure_after: u64,
}

impl fmt::Display for StepLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "case {} (sigma,rho)=({},{}) {} mu={} measure {} -> {}",
            self.case,
            self.sigma,
            self.rho,
            self.generator,
            self.mu,
            self.measure_before,
            self.measure_after
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RectOutcome<C: Coeff> {
    pub word: TameWord,
    pub s_out: Substitution<C>,
    pub status: RectStatus,
    pub log: Vec<StepLog>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    /// `x -> x + c D^e`
    Phi,
    /// `D -> D + c x^e`
    PhiP,
}

struct Move<C> {
    kind: Kind,
    e: u32,
    sigma: u32,
    rho: u32,
    case: String,
    poly: Vec<C>,
}

fn is_degenerate<C: Coeff>(p: &WeylOp<C>) -> bool {
    p.is_x_poly() || p.is_d_poly()
}

fn measure<C: Coeff>(p: &WeylOp<C>) -> u64 {
    (p.ord_x().unwrap_or(0) + p.ord().unwrap_or(0)) as u64
}

/// Corners `(l, k, I, J)` of a nonzero operator.
fn corners<C: Coeff>(p: &WeylOp<C>) -> (u32, u32, u32, u32) {
    let l = p.ord_x().unwrap_or(0);
    let k = p.ord().unwrap_or(0);
    let top_i = p.terms().filter(|(m, _)| m.j == k).map(|(m, _)| m.i).max().unwrap_or(0);
    let right_j = p.terms().filter(|(m, _)| m.i == l).map(|(m, _)| m.j).max().unwrap_or(0);
    (l, k, top_i, right_j)
}

fn shape_label(both_axes: bool, adjacent: bool, s: u32, r: u32, single: &str) -> String {
    match (both_axes, adjacent) {
        (false, _) => single.to_string(),
        (true, false) => "3".to_string(),
        (true, true) if s == r => "4d".to_string(),
        (true, true) if s > r => "4b".to_string(),
        (true, true) => "4c".to_string(),
    }
}

/// Move removing `B = (l, 0)`.
fn kill_b<C: Coeff>(p: &WeylOp<C>) -> Option<Move<C>> {
    let (l, k, top_i, right_j) = corners(p);
    if right_j != 0 {
        return None;
    }
    let hull = newton_polygon(p).ok()?;
    let idx = hull.iter().position(|&v| v == (l, 0))?;
    let v = hull[(idx + 1) % hull.len()];
    if v.1 == 0 || v.0 >= l {
        return None;
    }
    let g = v.1.gcd(&(l - v.0));
    let (sigma, rho) = (v.1 / g, (l - v.0) / g);
    if rho % sigma != 0 {
        return None;
    }
    let e = rho / sigma;
    let poly = (0..=l / e).map(|j| p.coeff(l - e * j, j)).collect();
    Some(Move {
        kind: Kind::PhiP,
        e,
        sigma,
        rho,
        case: shape_label(top_i == 0, v == (0, k), sigma, rho, "2"),
        poly,
    })
}

/// Move removing `A = (0, k)`.
fn kill_a<C: Coeff>(p: &WeylOp<C>) -> Option<Move<C>> {
    let (l, k, top_i, right_j) = corners(p);
    if top_i != 0 {
        return None;
    }
    let hull = newton_polygon(p).ok()?;
    let idx = hull.iter().position(|&v| v == (0, k))?;
    let v = hull[(idx + hull.len() - 1) % hull.len()];
    if v.0 == 0 || v.1 >= k {
        return None;
    }
    let g = (k - v.1).gcd(&v.0);
    let (sigma, rho) = ((k - v.1) / g, v.0 / g);
    if sigma % rho != 0 {
        return None;
    }
    let e = sigma / rho;
    let poly = (0..=k / e).map(|i| p.coeff(i, k - e * i)).collect();
    Some(Move {
        kind: Kind::Phi,
        e,
        sigma,
        rho,
        case: shape_label(right_j == 0, v == (l, 0), sigma, rho, "1"),
        poly,
    })
}

/// Rational `c` with `sum_j poly[j] c^j = 0` identically in the parameter,
/// most repeated first, then ascending.
fn common_roots<C: Coeff>(poly: &[C]) -> Vec<Rational> {
    let comps: Vec<Vec<Rational>> = poly.iter().map(Coeff::components).collect();
    let depth = comps.iter().map(Vec::len).max().unwrap_or(0);
    let mut g = ParamPoly::zero();
    for d in 0..depth {
        let pd = ParamPoly::from_coeffs(
            comps
                .iter()
                .map(|c| c.get(d).cloned().unwrap_or_else(Rational::zero))
                .collect(),
        );
        g = g.gcd(&pd);
    }
    let mut roots: Vec<(Rational, u32)> = rational_roots(&g)
        .into_iter()
        .filter(|(r, _)| !r.is_zero())
        .collect();
    roots.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    roots.into_iter().map(|(r, _)| r).collect()
}

fn step<C: Coeff>(s: &Substitution<C>, g: &TameGen, mode: Mode) -> Substitution<C> {
    let inner = match mode {
        Mode::Compose => s.clone(),
        Mode::Conjugate => s.compose(&g.inverse().substitution()),
    };
    Substitution {
        img_d: g.apply(&inner.img_d),
        img_x: g.apply(&inner.img_x),
        endo_certified: s.endo_certified,
    }
}

/// Applies tame moves until both images are rectangular, an image turns
/// degenerate, no rational move exists, or `max_steps` moves were made.
///
/// In [`Mode::Compose`] the result satisfies `s_out = word o s`; in
/// [`Mode::Conjugate`] it is `word o s o word^-1`, with `x -> x + c D^e`
/// moves taken from the image of `D` and `D -> D + c x^e` moves from the
/// image of `x` once the image of `D` is rectangular.
pub fn rectangularize<C: Coeff>(
    s: &Substitution<C>,
    max_steps: u32,
    mode: Mode,
) -> Result<RectOutcome<C>, MorphismError> {
    let mut cur = s.clone();
    let mut word = TameWord::default();
    let mut log = Vec::new();
    let finish = |cur, word, log, status| Ok(RectOutcome { word, s_out: cur, status, log });
    for _ in 0..=max_steps {
        if is_degenerate(&cur.img_d) {
            return finish(cur, word, log, RectStatus::TameExhausted);
        }
        let d_rect = is_rectangular(&cur.img_d)?.is_some();
        if mode == Mode::Conjugate && d_rect && is_degenerate(&cur.img_x) {
            return finish(cur, word, log, RectStatus::TameExhausted);
        }
        let x_rect = is_rectangular(&cur.img_x)?.is_some();
        if d_rect && x_rect {
            return finish(cur, word, log, RectStatus::Rectangular);
        }
        if log.len() as u32 == max_steps {
            return finish(cur, word, log, RectStatus::StepLimit);
        }
        let (target_is_d, moves): (bool, Vec<Move<C>>) = match mode {
            Mode::Compose if d_rect => {
                return Err(if cur.endo_certified {
                    MorphismError::Lemma6Violation
                } else {
                    MorphismError::XImageNotRectangular
                });
            }
            Mode::Compose => (true, [kill_b(&cur.img_d), kill_a(&cur.img_d)].into_iter().flatten().collect()),
            Mode::Conjugate if !d_rect => (true, kill_a(&cur.img_d).into_iter().collect()),
            Mode::Conjugate => (false, kill_b(&cur.img_x).into_iter().collect()),
        };
        if moves.is_empty() {
            return Err(MorphismError::NoApplicableMove);
        }
        let Some((mv, mu)) = moves
            .into_iter()
            .find_map(|m| common_roots(&m.poly).into_iter().next().map(|r| (m, r)))
        else {
            return finish(cur, word, log, RectStatus::IrrationalRoot);
        };
        let gen = match mv.kind {
            Kind::Phi => TameGen::phi(mv.e, mu.clone()),
            Kind::PhiP => TameGen::phi_p(mv.e, mu.clone()),
        };
        let target = |s: &Substitution<C>| measure(if target_is_d { &s.img_d } else { &s.img_x });
        let before = target(&cur);
        let next = step(&cur, &gen, mode);
        let after = target(&next);
        if after >= before {
            return Err(MorphismError::MeasureNotDecreasing { before, after });
        }
        let case = match mode {
            Mode::Compose => mv.case,
            Mode::Conjugate if target_is_d => "I".to_string(),
            Mode::Conjugate => "II".to_string(),
        };
        log.push(StepLog {
            case,
            sigma: mv.sigma,
            rho: mv.rho,
            generator: gen.clone(),
            mu,
            measure_before: before,
            measure_after: after,
        });
        word.0.push(gen);
        cur = next;
    }
    unreachable!("loop returns by the step limit")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;

    type Op = WeylOp<Rational>;

    fn t(terms: &[(u32, u32, i64)]) -> Op {
        Op::from_terms(terms.iter().map(|&(i, j, c)| (i, j, int(c))))
    }

    #[test]
    fn square_of_d_plus_x() {
        let sq = (&Op::d() + &Op::x()).pow(2);
        assert_eq!(sq, t(&[(0, 2, 1), (1, 1, 2), (2, 0, 1), (0, 0, 1)]));
        let out = rectangularize(&Substitution::new(sq, Op::x()), 3, Mode::Compose).unwrap();
        assert_eq!(out.status, RectStatus::TameExhausted);
        assert_eq!(out.word.to_string(), "PhiP(1,-1)");
        assert_eq!(out.s_out.img_d, t(&[(0, 2, 1)]));
        assert_eq!(out.log.len(), 1);
        assert_eq!(out.log[0].case, "4d");
        assert_eq!((out.log[0].measure_before, out.log[0].measure_after), (4, 2));
    }

    #[test]
    fn rectangular_input_is_untouched() {
        let s = Substitution::new(t(&[(1, 1, 1), (0, 1, 1)]), t(&[(2, 2, 1), (1, 0, 3)]));
        let out = rectangularize(&s, 5, Mode::Compose).unwrap();
        assert_eq!(out.status, RectStatus::Rectangular);
        assert!(out.word.is_empty());
        assert_eq!(out.s_out, s);
    }

    #[test]
    fn linear_image_is_exhausted() {
        let s = Substitution::new(&Op::d() + &Op::x(), Op::x()).certify();
        let out = rectangularize(&s, 3, Mode::Compose).unwrap();
        assert_eq!(out.status, RectStatus::TameExhausted);
        assert_eq!(out.s_out.img_d, Op::d());
        assert_eq!(out.word.len(), 1);
    }

    #[test]
    fn hidden_rectangular_map_is_recovered() {
        // rect = (x D + D, x^2 D^2 + x); hide it behind Phi(1,2) on the left
        let rect = Substitution::new(t(&[(1, 1, 1), (0, 1, 1)]), t(&[(2, 2, 1), (1, 0, 1)]));
        let g = TameGen::phi(1, int(2));
        let hidden = g.substitution::<Rational>().compose(&rect);
        let out = rectangularize(&hidden, 5, Mode::Compose).unwrap();
        assert_eq!(out.status, RectStatus::Rectangular);
        let rebuilt = out.word.to_sub::<Rational>().compose(&hidden);
        assert_eq!(rebuilt, Substitution { endo_certified: false, ..out.s_out.clone() });
        for st in &out.log {
            assert!(st.measure_after < st.measure_before);
        }
    }

    #[test]
    fn irrational_edge_polynomial() {
        // D^2 - 2 x^2 has edge polynomial 1... c^2 - 2 after D -> D + c x
        let p = t(&[(0, 2, 1), (2, 0, -2), (0, 0, 1)]);
        let out = rectangularize(&Substitution::new(p, Op::x()), 3, Mode::Compose).unwrap();
        assert_eq!(out.status, RectStatus::IrrationalRoot);
        assert!(out.word.is_empty());
    }

    #[test]
    fn conjugation_keeps_relation_to_input() {
        let rect = Substitution::new(t(&[(1, 1, 1), (0, 1, 1)]), t(&[(2, 2, 1), (1, 0, 1)]));
        let g = TameGen::phi(1, int(1));
        let hidden = g
            .substitution::<Rational>()
            .compose(&rect)
            .compose(&g.inverse().substitution());
        let out = rectangularize(&hidden, 6, Mode::Conjugate).unwrap();
        let w = out.word.to_sub::<Rational>();
        let expect = w.compose(&hidden).compose(&out.word.inverse().to_sub());
        assert_eq!(out.s_out.img_d, expect.img_d);
        assert_eq!(out.s_out.img_x, expect.img_x);
        assert_eq!(out.status, RectStatus::Rectangular, "{:?}", out.log);
    }
}
