//! Operator expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | atom ('^' nat)?
//! atom   := rational | 'x' | 'D' | 'a' | '(' expr ')'
//! ```
//!
//! `*` is the noncommutative product and `a` is the parameter. A literal such
//! as `3/4` is a single rational token.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use crate::scalars::{Coeff, ParamPoly, Rational};
use crate::weyl::WeylOp;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(Rational),
    X,
    D,
    Alpha,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn eval(&self) -> WeylOp<ParamPoly> {
        match self {
            Expr::Num(r) => WeylOp::constant(ParamPoly::constant(r.clone())),
            Expr::X => WeylOp::x(),
            Expr::D => WeylOp::d(),
            Expr::Alpha => WeylOp::constant(ParamPoly::alpha()),
            Expr::Neg(e) => -e.eval(),
            Expr::Add(a, b) => a.eval() + b.eval(),
            Expr::Sub(a, b) => a.eval() - b.eval(),
            Expr::Mul(a, b) => a.eval() * b.eval(),
            Expr::Pow(a, n) => a.eval().pow(*n),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Sym(char),
    Op(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(r) => write!(f, "number {r}"),
            Tok::Sym(c) => write!(f, "'{c}'"),
            Tok::Op(c) => write!(f, "'{c}'"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

struct Lexed {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Lexed>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut col) = (1, 1);
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            k += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            k += 1;
            continue;
        }
        let tok = if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let num: BigInt = chars[start..k].iter().collect::<String>().parse().expect("digits");
            let mut r = Rational::from_integer(num);
            if k + 1 < chars.len() && chars[k] == '/' && chars[k + 1].is_ascii_digit() {
                let s2 = k + 1;
                k = s2;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
                let den: BigInt = chars[s2..k].iter().collect::<String>().parse().expect("digits");
                if den == BigInt::from(0) {
                    return Err(ParseError { line: l0, col: c0, msg: "zero denominator".into() });
                }
                r /= Rational::from_integer(den);
            }
            col += k - start;
            Tok::Num(r)
        } else {
            k += 1;
            col += 1;
            match c {
                'x' | 'D' | 'a' => Tok::Sym(c),
                '+' | '-' | '*' | '^' | '(' | ')' => Tok::Op(c),
                _ => {
                    return Err(ParseError { line: l0, col: c0, msg: format!("unexpected character '{c}'") })
                }
            }
        };
        out.push(Lexed { tok, line: l0, col: c0 });
    }
    out.push(Lexed { tok: Tok::End, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn next(&mut self) -> &Lexed {
        let t = &self.toks[self.pos];
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: String) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError { line: t.line, col: t.col, msg }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.next();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Op('-') => {
                    self.next();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        while self.peek() == &Tok::Op('*') {
            self.next();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == &Tok::Op('-') {
            self.next();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.peek() != &Tok::Op('^') {
            return Ok(base);
        }
        self.next();
        let e = match self.peek().clone() {
            Tok::Num(r) if r.is_integer() && !r.is_negative() => r
                .to_integer()
                .to_u32()
                .ok_or_else(|| self.err("exponent too large".into()))?,
            Tok::Num(_) => return Err(self.err("exponent must be a natural number".into())),
            Tok::Op('-') => return Err(self.err("negative exponent".into())),
            Tok::Sym(c) => return Err(self.err(format!("symbolic exponent '{c}'"))),
            t => return Err(self.err(format!("expected exponent, found {t}"))),
        };
        self.next();
        Ok(Expr::Pow(Box::new(base), e))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Num(r) => {
                self.next();
                Ok(Expr::Num(r))
            }
            Tok::Sym(c) => {
                self.next();
                Ok(match c {
                    'x' => Expr::X,
                    'D' => Expr::D,
                    _ => Expr::Alpha,
                })
            }
            Tok::Op('(') => {
                self.next();
                let e = self.expr()?;
                if self.peek() != &Tok::Op(')') {
                    return Err(self.err(format!("expected ')', found {}", self.peek())));
                }
                self.next();
                Ok(e)
            }
            t => Err(self.err(format!("unexpected {t}"))),
        }
    }
}

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let e = p.expr()?;
    if p.peek() != &Tok::End {
        return Err(p.err(format!("unexpected {}", p.peek())));
    }
    Ok(e)
}

pub fn parse_op(text: &str) -> Result<WeylOp<ParamPoly>, ParseError> {
    Ok(parse(text)?.eval())
}

/// Rational literal with an optional sign, as accepted on the command line.
pub fn parse_rational_arg(text: &str) -> Result<Rational, ParseError> {
    parse_op(text)?
        .as_constant()
        .and_then(|c| c.as_rational())
        .ok_or(ParseError { line: 1, col: 1, msg: format!("not a rational number: {text}") })
}
