//! Text grammar shared by every file format.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' INT)?
//! atom   := INT ('/' INT)? | NAME | '(' expr ')'
//! NAME   := [A-Za-z][A-Za-z0-9_]*
//! ```
//!
//! Juxtaposition is rejected: `2x` and `x y` are errors.

use num_bigint::BigInt;
use num_traits::Zero;

use super::poly::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Rational),
    Sym { name: String, line: usize, column: usize },
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

/// Evaluation target for parsed expressions.
pub trait ExprAlgebra {
    type Value: Clone;
    fn number(&self, r: &Rational) -> Self::Value;
    fn symbol(&self, name: &str) -> Option<Self::Value>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn neg(&self, a: &Self::Value) -> Self::Value;
}

impl Expr {
    pub fn eval<A: ExprAlgebra>(&self, alg: &A) -> Result<A::Value> {
        Ok(match self {
            Expr::Num(r) => alg.number(r),
            Expr::Sym { name, line, column } => alg.symbol(name).ok_or_else(|| Error::Parse {
                line: *line,
                column: *column,
                message: format!("unknown symbol {name}"),
            })?,
            Expr::Add(a, b) => alg.add(&a.eval(alg)?, &b.eval(alg)?)?,
            Expr::Sub(a, b) => alg.sub(&a.eval(alg)?, &b.eval(alg)?)?,
            Expr::Mul(a, b) => alg.mul(&a.eval(alg)?, &b.eval(alg)?)?,
            Expr::Neg(a) => alg.neg(&a.eval(alg)?),
            Expr::Pow(a, e) => {
                let base = a.eval(alg)?;
                let mut acc = alg.number(&Rational::from_integer(BigInt::from(1)));
                for _ in 0..*e {
                    acc = alg.mul(&acc, &base)?;
                }
                acc
            }
        })
    }

    pub fn symbols(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut Vec<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Sym { name, .. } => {
                if !out.contains(name) {
                    out.push(name.clone())
                }
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.collect_symbols(out);
                b.collect_symbols(out);
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect_symbols(out),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Op(char),
}

struct Lexed {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str, line0: usize, col0: usize) -> Result<Vec<Lexed>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    let mut line = line0;
    let mut col = col0;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let (l, cl) = (line, col);
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Lexed { tok: Tok::Int(s.parse().unwrap()), line: l, column: cl });
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Lexed { tok: Tok::Name(s), line: l, column: cl });
        } else if "+-*^/()".contains(c) {
            out.push(Lexed { tok: Tok::Op(c), line: l, column: cl });
            i += 1;
            col += 1;
        } else {
            return Err(Error::Parse { line: l, column: cl, message: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|t| (t.line, t.column)).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, column) = self.here();
        Err(Error::Parse { line, column, message: msg.into() })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Op('+')) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Op('-')) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(Tok::Op('*')) = self.peek() {
            self.pos += 1;
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| ()).or_else(|_| self.err("exponent too large"))?;
                    return Ok(Expr::Pow(Box::new(base), e));
                }
                _ => return self.err("expected nonnegative integer exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let (line, column) = self.here();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                if let Some(Tok::Op('/')) = self.peek() {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Tok::Int(d)) if !d.is_zero() => {
                            self.pos += 1;
                            Ok(Expr::Num(Rational::new(n, d)))
                        }
                        Some(Tok::Int(_)) => self.err("zero denominator"),
                        _ => self.err("expected integer denominator"),
                    }
                } else {
                    Ok(Expr::Num(Rational::from_integer(n)))
                }
            }
            Some(Tok::Name(s)) => {
                self.pos += 1;
                Ok(Expr::Sym { name: s, line, column })
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => self.err("expected ')'"),
                }
            }
            Some(_) => self.err("unexpected token"),
            None => self.err("unexpected end of expression"),
        }
    }
}

/// Parse an expression; `line`/`column` locate the first character for
/// diagnostics (1-based).
pub fn parse_expr_at(src: &str, line: usize, column: usize) -> Result<Expr> {
    let toks = lex(src, line, column)?;
    let end = (line, column + src.chars().count());
    let mut p = Parser { toks, pos: 0, end };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return p.err("unexpected trailing input (juxtaposition is not allowed)");
    }
    Ok(e)
}

pub fn parse_expr(src: &str) -> Result<Expr> {
    parse_expr_at(src, 1, 1)
}

pub fn is_valid_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic()) && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let e = parse_expr(s.trim())?;
    fn num(e: &Expr) -> Option<Rational> {
        match e {
            Expr::Num(r) => Some(r.clone()),
            Expr::Neg(a) => num(a).map(|r| -r),
            _ => None,
        }
    }
    num(&e).ok_or_else(|| Error::Parse { line: 1, column: 1, message: format!("expected a rational number, got '{s}'") })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_juxtaposition() {
        assert!(matches!(parse_expr("2x"), Err(Error::Parse { column: 2, .. })));
        assert!(parse_expr("x y").is_err());
        assert!(parse_expr("2*x").is_ok());
    }

    #[test]
    fn rationals_and_powers() {
        let e = parse_expr("-3/4*x^2 + (y - 1)").unwrap();
        assert_eq!(e.symbols(), vec!["x".to_string(), "y".to_string()]);
        assert!(parse_expr("x^-1").is_err());
        assert!(parse_expr("1/0").is_err());
        assert_eq!(parse_rational("-1/2").unwrap(), Rational::new((-1).into(), 2.into()));
    }

    #[test]
    fn reports_position_of_bad_character() {
        match parse_expr("x + $") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 5)),
            other => panic!("{other:?}"),
        }
    }
}
