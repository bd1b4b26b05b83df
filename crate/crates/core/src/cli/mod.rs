//! Command-line front end. [`run`] parses arguments, dispatches, and returns
//! the exit code with everything that would be printed.
//!
//! Exit codes: 0 success, 1 domain error (reported with the module's error
//! name), 2 usage error (bad flags or unparsable input text).

mod parse;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_traits::Zero;
use serde_json::{json, Value};

use crate::morphism::{rectangularize, Mode, MorphismError, Substitution, TameGen, TameWord};
use crate::polygon::{almost_commute, hom_part, newton_polygon, top_line, PolygonError, WeightVec};
use crate::psido::{schur_normalize, PsidoError};
use crate::scalars::{Coeff, ParamPoly, Rational};
use crate::spectral::{
    dixmier_pair, find_relation, orbit_search, relation_columns, space_probes, SpectralError,
};
use crate::weyl::{BiPoly, WeylError, WeylOp};

pub use parse::{parse, parse_op, parse_rational_arg, Expr, ParseError};

type Op = WeylOp<ParamPoly>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "weyl", version, about = "Exact computations in the first Weyl algebra A1 = K[x][D]")]
struct Cli {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Specialize the parameter `a` to this rational.
    #[arg(long, global = true, value_parser = rational, allow_hyphen_values = true)]
    alpha: Option<Rational>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Weight {
    #[arg(long, value_parser = rational, allow_hyphen_values = true, default_value = "1")]
    sigma: Rational,
    #[arg(long, value_parser = rational, allow_hyphen_values = true, default_value = "1")]
    rho: Rational,
}

#[derive(Args, Debug)]
struct MapArgs {
    /// Tame word such as `Phi(1,2);PhiP(2,-1);Lin(0,1,-1,0)`.
    #[arg(long, allow_hyphen_values = true)]
    word: Option<String>,
    /// Image of D.
    #[arg(long = "img-d", allow_hyphen_values = true)]
    img_d: Option<String>,
    /// Image of x.
    #[arg(long = "img-x", allow_hyphen_values = true)]
    img_x: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Normal form of an expression.
    Normalize {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Product A*B.
    Mul {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Commutator [A, B] = A*B - B*A.
    Comm {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Orders in D and in x.
    Ord {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Vertices of the Newton polygon, counterclockwise.
    Polygon {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Top homogeneous part for the weight (sigma, rho).
    HomPart {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[command(flatten)]
        w: Weight,
    },
    /// Whether the top part of [A, B] vanishes.
    AlmostCommute {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[command(flatten)]
        w: Weight,
    },
    /// Image of an expression under a substitution.
    Apply {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[command(flatten)]
        map: MapArgs,
    },
    /// The map FIRST o SECOND for two tame words.
    Compose {
        #[arg(allow_hyphen_values = true)]
        first: String,
        #[arg(allow_hyphen_values = true)]
        second: String,
    },
    /// Drive a substitution to rectangular type with tame moves.
    Rectangularize {
        #[command(flatten)]
        map: MapArgs,
        /// Conjugate instead of composing on the left.
        #[arg(long)]
        conjugate: bool,
        #[arg(long, default_value_t = 20)]
        max_steps: u32,
    },
    /// Schur normalization S^-1 Q S = c D^q.
    Schur {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long = "N", default_value_t = 8)]
        n: u32,
        #[arg(long = "M", default_value_t = 12)]
        m: usize,
    },
    /// Check the Dixmier pair L4, L6.
    DixmierVerify,
    /// Polynomial relations f(P, Q) = 0 in a degree box.
    FindRelation {
        #[arg(allow_hyphen_values = true)]
        p: String,
        #[arg(allow_hyphen_values = true)]
        q: String,
        #[arg(long, default_value_t = 3)]
        degx: u32,
        #[arg(long, default_value_t = 3)]
        degy: u32,
        /// Keep `a` symbolic instead of specializing it (default 0).
        #[arg(long)]
        symbolic: bool,
    },
    /// V_Q dimension, nilpotency index, eigenvalue and centrality of Q under ad P.
    Probe {
        #[arg(allow_hyphen_values = true)]
        p: String,
        #[arg(allow_hyphen_values = true)]
        q: String,
        #[arg(long, default_value_t = 4)]
        bound: u32,
    },
    /// Breadth-first search of the Dixmier pair's orbit under tame generators.
    OrbitSearch {
        /// File with one generator per line (or separated by `;`).
        #[arg(long)]
        gens: PathBuf,
        #[arg(long, default_value_t = 2)]
        depth: u32,
        #[arg(long, default_value_t = 100_000)]
        max_pairs: usize,
    },
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational_arg(s).map_err(|e| e.to_string())
}

enum Failure {
    Usage(String),
    Domain(&'static str, String),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Usage(format!("parse error at {e}"))
    }
}

macro_rules! domain {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::Domain(e.name(), e.to_string())
            }
        }
    )*};
}
domain!(WeylError, PolygonError, PsidoError, SpectralError);

impl From<MorphismError> for Failure {
    fn from(e: MorphismError) -> Self {
        match e {
            MorphismError::BadWord(_) => Failure::Usage(e.to_string()),
            e => Failure::Domain(e.name(), e.to_string()),
        }
    }
}

struct Report {
    text: String,
    json: Value,
    ok: bool,
}

impl Report {
    fn new(text: impl Into<String>, json: Value) -> Self {
        Report { text: text.into(), json, ok: true }
    }
}

struct Ctx {
    alpha: Option<Rational>,
}

impl Ctx {
    fn op(&self, text: &str) -> Result<Op, Failure> {
        let op = parse_op(text)?;
        Ok(match &self.alpha {
            Some(a) => constant_coeffs(&op.specialize(a)),
            None => op,
        })
    }

    fn map(&self, m: &MapArgs) -> Result<Substitution<ParamPoly>, Failure> {
        match (&m.word, &m.img_d, &m.img_x) {
            (Some(w), None, None) => Ok(w.parse::<TameWord>()?.to_sub()),
            (None, Some(d), Some(x)) => Ok(Substitution::new(self.op(d)?, self.op(x)?).certify()),
            _ => Err(Failure::Usage("give either --word or both --img-d and --img-x".into())),
        }
    }
}

fn constant_coeffs(op: &WeylOp<Rational>) -> Op {
    op.map_coeffs(|r| ParamPoly::constant(r.clone()))
}

fn weight(w: &Weight) -> Result<WeightVec, Failure> {
    Ok(WeightVec::new(w.sigma.clone(), w.rho.clone())?)
}

fn word_text(w: &TameWord) -> String {
    if w.is_empty() {
        "id".into()
    } else {
        w.to_string()
    }
}

fn sub_json<C: Coeff>(s: &Substitution<C>) -> Value {
    json!({"img_d": s.img_d.to_json(), "img_x": s.img_x.to_json(), "certified": s.endo_certified})
}

fn relation_text<C: Coeff>(f: &BiPoly<C>) -> String {
    f.render("X", "Y")
}

fn dispatch(cmd: &Cmd, ctx: &Ctx) -> Result<Report, Failure> {
    Ok(match cmd {
        Cmd::Normalize { expr } => {
            let p = ctx.op(expr)?;
            Report::new(p.to_string(), p.to_json())
        }
        Cmd::Mul { a, b } => {
            let p = &ctx.op(a)? * &ctx.op(b)?;
            Report::new(p.to_string(), p.to_json())
        }
        Cmd::Comm { a, b } => {
            let p = ctx.op(a)?.commutator(&ctx.op(b)?);
            Report::new(p.to_string(), p.to_json())
        }
        Cmd::Ord { expr } => {
            let p = ctx.op(expr)?;
            let (o, ox) = (p.ord()?, p.ord_x()?);
            Report::new(format!("ord {o}\nord_x {ox}"), json!({"ord": o, "ord_x": ox}))
        }
        Cmd::Polygon { expr } => {
            let hull = newton_polygon(&ctx.op(expr)?)?;
            let text: Vec<String> = hull.iter().map(|(i, j)| format!("({i},{j})")).collect();
            Report::new(text.join(" "), json!({ "vertices": hull }))
        }
        Cmd::HomPart { expr, w } => {
            let p = ctx.op(expr)?;
            let w = weight(w)?;
            let f = hom_part(&p, &w)?;
            let line = top_line(&p, &w)?;
            Report::new(
                format!("{f}\ntop line {line}"),
                json!({"hom_part": f.to_string(), "top_line": line.to_string(), "degree": line.theta.to_string()}),
            )
        }
        Cmd::AlmostCommute { a, b, w } => {
            let r = almost_commute(&ctx.op(a)?, &ctx.op(b)?, &weight(w)?)?;
            Report::new(r.to_string(), json!({ "almost_commute": r }))
        }
        Cmd::Apply { expr, map } => {
            let s = ctx.map(map)?;
            let p = s.apply(&ctx.op(expr)?);
            Report::new(p.to_string(), p.to_json())
        }
        Cmd::Compose { first, second } => {
            let a: TameWord = first.parse()?;
            let b: TameWord = second.parse()?;
            let s = a.to_sub::<ParamPoly>().compose(&b.to_sub());
            Report::new(s.to_string(), sub_json(&s))
        }
        Cmd::Rectangularize { map, conjugate, max_steps } => {
            let s = ctx.map(map)?;
            let mode = if *conjugate { Mode::Conjugate } else { Mode::Compose };
            let out = rectangularize(&s, *max_steps, mode)?;
            let mut text: Vec<String> = out.log.iter().map(|l| l.to_string()).collect();
            text.push(format!("status {}", out.status));
            text.push(format!("word {}", word_text(&out.word)));
            text.push(out.s_out.to_string());
            let steps: Vec<Value> = out
                .log
                .iter()
                .map(|l| {
                    json!({
                        "case": l.case, "sigma": l.sigma, "rho": l.rho,
                        "generator": l.generator.to_string(), "mu": l.mu.to_string(),
                        "measure_before": l.measure_before, "measure_after": l.measure_after,
                    })
                })
                .collect();
            Report::new(
                text.join("\n"),
                json!({"status": out.status.to_string(), "word": out.word.to_string(), "steps": steps, "result": sub_json(&out.s_out)}),
            )
        }
        Cmd::Schur { expr, n, m } => {
            let s = schur_normalize(&ctx.op(expr)?, *n, *m)?;
            let zero = s.residual_vanishes();
            let fl = s.order_floor();
            let text = format!(
                "S = {}\nc = {}\nS^-1 Q S = {}\nresidual {} down to order {fl} (x-truncation {m})",
                s.s,
                s.c,
                s.conj,
                if zero { "zero" } else { "NONZERO" }
            );
            let coeffs: Vec<String> = (1..=*n).map(|k| s.s_coeff(k).to_string()).collect();
            let mut r = Report::new(
                text,
                json!({"S": s.s.to_string(), "c": s.c.to_string(), "conj": s.conj.to_string(),
                       "s": coeffs, "order_floor": fl, "residual_zero": zero}),
            );
            r.ok = zero;
            r
        }
        Cmd::DixmierVerify => dixmier_verify(ctx)?,
        Cmd::FindRelation { p, q, degx, degy, symbolic } => {
            let (p, q) = (parse_op(p)?, parse_op(q)?);
            if *symbolic && ctx.alpha.is_none() {
                relation_report(&p, &q, *degx, *degy)?
            } else {
                let a = ctx.alpha.clone().unwrap_or_default();
                relation_report(&p.specialize(&a), &q.specialize(&a), *degx, *degy)?
            }
        }
        Cmd::Probe { p, q, bound } => {
            let r = space_probes(&ctx.op(p)?, &ctx.op(q)?, *bound)?;
            let dim = if r.vq_stable { r.vq_dim.to_string() } else { format!(">= {}", r.vq_dim) };
            let opt = |o: Option<String>| o.unwrap_or_else(|| "none".into());
            let nil = r.nilpotency.map(|n| n.to_string());
            let eig = r.eigen.as_ref().map(|l| l.to_string());
            Report::new(
                format!(
                    "vq_dim {dim}\nnilpotency {}\neigen {}\ncentral {}",
                    opt(nil.clone()),
                    opt(eig.clone()),
                    r.central
                ),
                json!({"vq_dim": r.vq_dim, "vq_stable": r.vq_stable, "nilpotency": r.nilpotency,
                       "eigen": eig, "central": r.central}),
            )
        }
        Cmd::OrbitSearch { gens, depth, max_pairs } => {
            let text = std::fs::read_to_string(gens)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", gens.display())))?;
            let gens = parse_gens(&text)?;
            let a = ctx.alpha.clone().unwrap_or_default();
            let start = dixmier_pair().specialize(&a)?;
            let r = orbit_search(&start, &gens, *depth, *max_pairs)?;
            let mut lines = vec![
                format!("distinct pairs {}", r.distinct_pairs),
                format!("explored depth {}{}", r.explored_depth, if r.complete { "" } else { " (budget reached)" }),
                "all visited pairs satisfy the relation and commute".to_string(),
                format!("collisions {}", r.collisions.len()),
            ];
            lines.extend(r.collisions.iter().map(|c| format!("  {} == {}", word_text(&c.first), word_text(&c.second))));
            let cols: Vec<Value> = r
                .collisions
                .iter()
                .map(|c| json!([c.first.to_string(), c.second.to_string()]))
                .collect();
            Report::new(
                lines.join("\n"),
                json!({"distinct_pairs": r.distinct_pairs, "explored_depth": r.explored_depth,
                       "complete": r.complete, "collisions": cols,
                       "words": r.words.iter().map(|w| w.to_string()).collect::<Vec<_>>()}),
            )
        }
    })
}

fn parse_gens(text: &str) -> Result<Vec<TameGen>, Failure> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        for piece in line.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            out.push(piece.parse::<TameGen>()?);
        }
    }
    if out.is_empty() {
        return Err(Failure::Usage("generator file is empty".into()));
    }
    Ok(out)
}

fn relation_report<C: Coeff>(p: &WeylOp<C>, q: &WeylOp<C>, degx: u32, degy: u32) -> Result<Report, Failure> {
    let r = find_relation(p, q, degx, degy)?;
    let basis: Vec<String> = r.basis.iter().map(relation_text).collect();
    let mut text = vec![format!("rank {} of {} columns ({} rows)", r.rank, r.columns, r.rows)];
    if basis.is_empty() {
        text.push("no relation in the degree box".into());
    }
    text.extend(basis.iter().map(|b| format!("{b} = 0")));
    let cols: Vec<String> = relation_columns(degx, degy)
        .iter()
        .map(|&(i, j)| relation_text(&BiPoly::<Rational>::from_terms([(i, j, Rational::from_integer(1.into()))])))
        .collect();
    Ok(Report::new(
        text.join("\n"),
        json!({"basis": basis, "rank": r.rank, "columns": cols, "rows": r.rows}),
    ))
}

fn dixmier_verify(ctx: &Ctx) -> Result<Report, Failure> {
    let pair = dixmier_pair();
    let (l4, l6, alpha) = match &ctx.alpha {
        Some(a) => (
            constant_coeffs(&pair.p().specialize(a)),
            constant_coeffs(&pair.q().specialize(a)),
            Op::constant(ParamPoly::constant(a.clone())),
        ),
        None => (pair.p().clone(), pair.q().clone(), Op::constant(ParamPoly::alpha())),
    };
    let diff = &l6.pow(2) - &l4.pow(3);
    let relation = (&diff - &alpha).is_zero();
    let printed = &diff + &alpha;
    let comm = l4.commutator(&l6).is_zero();
    let (o4, o6) = (l4.ord()?, l6.ord()?);
    let ok = relation && comm && o4 == 4 && o6 == 6;
    let text = format!(
        "L4 = {l4}\nL6 = {l6}\nord(L4) = {o4}\nord(L6) = {o6}\nL6^2 - L4^3 = {diff}\n\
         relation Y^2 - X^3 - a = 0: {relation}\n[L4, L6] = 0: {comm}\n\
         with the opposite sign, L6^2 - L4^3 + a = {printed}"
    );
    let mut r = Report::new(
        text,
        json!({"L4": l4.to_json(), "L6": l6.to_json(), "ord_L4": o4, "ord_L6": o6,
               "difference": diff.to_string(), "relation": "Y^2 - X^3 - a", "relation_holds": relation,
               "commutator_zero": comm}),
    );
    r.ok = ok;
    Ok(r)
}

/// Runs the command line `args` (program name first).
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return Output { code, stdout, stderr };
        }
    };
    let ctx = Ctx { alpha: cli.alpha.clone() };
    match dispatch(&cli.cmd, &ctx) {
        Ok(r) => {
            let body = if cli.json { r.json.to_string() } else { r.text };
            Output { code: if r.ok { 0 } else { 1 }, stdout: body + "\n", stderr: String::new() }
        }
        Err(Failure::Usage(msg)) => Output { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") },
        Err(Failure::Domain(name, msg)) => {
            Output { code: 1, stdout: String::new(), stderr: format!("error: {name}: {msg}\n") }
        }
    }
}
