//! Expression language shared by the CLI and the fixture corpus.
//!
//! ```text
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ['^' power]
//! power  := ['-'] integer | '(' expr ')'
//! atom   := integer | 'i' | 'xi' | 'n' | identifier | '(' expr ')'
//! ```
//!
//! Identifiers are atoms (HP, G_TT, ...), ξ′-structures (S_XY, ...),
//! Clifford letters (CXI, CDXN, P0) or names bound by the caller.
//! Products are noncommutative; `/` and negative powers need a radial divisor.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use thiserror::Error;

use crate::arith::{BigRational, GaussianRational};
use crate::clifford::Letter;
use crate::ratfunc::RatFuncXi;
use crate::symbols::{Atom, SymbolError, SymbolExpr, XiStructure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    SyntaxError { offset: usize, message: String },
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("exponent must be an integer constant, got {0}")]
    BadExponent(String),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
}

impl From<crate::ratfunc::RatFuncError> for ExprError {
    fn from(e: crate::ratfunc::RatFuncError) -> Self {
        ExprError::Symbol(SymbolError::RatFunc(e))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    I,
    Xi,
    N,
    Ident(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::SyntaxError { offset: self.pos, message: message.into() })
    }

    fn expect(&mut self, c: u8) -> Result<(), ExprError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{}`", c as char))
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = if self.peek() == Some(b'-') {
            self.pos += 1;
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let exp = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                e
            }
            Some(b'-') => {
                self.pos += 1;
                Expr::Neg(Box::new(self.integer()?))
            }
            Some(c) if c.is_ascii_digit() => self.integer()?,
            _ => return self.err("expected exponent"),
        };
        Ok(Expr::Pow(Box::new(base), Box::new(exp)))
    }

    fn integer(&mut self) -> Result<Expr, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(Expr::Int(text.parse().expect("digits parse")))
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            None => self.err("unexpected end of input"),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => self.integer(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let id = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii ident");
                Ok(match id {
                    "i" => Expr::I,
                    "xi" => Expr::Xi,
                    "n" => Expr::N,
                    _ => Expr::Ident(id.to_string()),
                })
            }
            Some(c) => self.err(format!("unexpected character `{}`", c as char)),
        }
    }
}

pub fn parse_expression(text: &str) -> Result<Expr, ExprError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Evaluation context: the dimension n and caller-bound names.
#[derive(Clone, Debug, Default)]
pub struct Scope {
    pub n: u32,
    pub bindings: BTreeMap<String, SymbolExpr>,
}

impl Scope {
    pub fn new(n: u32) -> Self {
        Self { n, bindings: BTreeMap::new() }
    }
}

fn integer_exponent(e: &SymbolExpr) -> Result<i64, ExprError> {
    let c = e
        .as_radial()
        .ok()
        .and_then(|r| r.as_constant())
        .ok_or_else(|| ExprError::BadExponent(e.to_text()))?;
    if !c.is_real() || !c.re().is_integer() {
        return Err(ExprError::BadExponent(c.to_string()));
    }
    i64::try_from(c.re().to_integer()).map_err(|_| ExprError::BadExponent(c.to_string()))
}

impl Expr {
    pub fn lower(&self, scope: &Scope) -> Result<SymbolExpr, ExprError> {
        Ok(match self {
            Expr::Int(v) => SymbolExpr::constant(GaussianRational::real(BigRational::from_integer(v.clone()))),
            Expr::I => SymbolExpr::constant(GaussianRational::i()),
            Expr::Xi => SymbolExpr::radial(RatFuncXi::xi(), 0),
            Expr::N => SymbolExpr::constant(GaussianRational::from(scope.n as i64)),
            Expr::Ident(id) => {
                if let Some(b) = scope.bindings.get(id) {
                    b.clone().with_order(0)
                } else if let Some(a) = Atom::from_tag(id) {
                    SymbolExpr::atom(a)
                } else if let Some(s) = XiStructure::from_tag(id) {
                    SymbolExpr::structure(s)
                } else if let Ok(l) = Letter::from_tag(id) {
                    SymbolExpr::letter(l)
                } else {
                    return Err(ExprError::UnknownIdentifier(id.clone()));
                }
            }
            Expr::Neg(a) => a.lower(scope)?.neg(),
            Expr::Add(a, b) => a.lower(scope)?.add(&b.lower(scope)?),
            Expr::Sub(a, b) => a.lower(scope)?.sub(&b.lower(scope)?),
            Expr::Mul(a, b) => a.lower(scope)?.mul(&b.lower(scope)?)?,
            Expr::Div(a, b) => {
                let den = b.lower(scope)?.as_radial()?;
                a.lower(scope)?.scale_radial(&den.inv()?)
            }
            Expr::Pow(a, e) => {
                let k = integer_exponent(&e.lower(scope)?)?;
                let base = a.lower(scope)?;
                if k >= 0 {
                    base.pow(k as u32)?
                } else {
                    SymbolExpr::radial(base.as_radial()?.powi(k)?, 0)
                }
            }
        })
    }
}

/// Parses and lowers `text` at dimension `n`.
pub fn parse_symbol(text: &str, scope: &Scope) -> Result<SymbolExpr, ExprError> {
    parse_expression(text)?.lower(scope)
}

/// Parses a pure rational function of ξ_n.
pub fn parse_ratfunc(text: &str, n: u32) -> Result<RatFuncXi, ExprError> {
    Ok(parse_symbol(text, &Scope::new(n))?.as_radial()?)
}

/// Parses a constant in ℚ(i).
pub fn parse_constant(text: &str, n: u32) -> Result<GaussianRational, ExprError> {
    let r = parse_ratfunc(text, n)?;
    r.as_constant().ok_or_else(|| ExprError::Symbol(SymbolError::NotRadial(text.to_string())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::RatFuncError;

    #[test]
    fn parse_examples() {
        let f = parse_ratfunc("xi/(1+xi^2)^2", 4).unwrap();
        assert_eq!(f.multiplicity_at(&GaussianRational::i()), 2);
        assert_eq!(f.multiplicity_at(&-GaussianRational::i()), 2);
        let g = parse_ratfunc("1/(xi-i)", 4).unwrap();
        assert_eq!(g.poles(), &[(GaussianRational::i(), 1)]);
        assert_eq!(
            parse_expression("xi/("),
            Err(ExprError::SyntaxError { offset: 4, message: "unexpected end of input".into() })
        );
    }

    #[test]
    fn lowering_errors() {
        assert!(matches!(
            parse_ratfunc("1/(xi-1)", 4),
            Err(ExprError::Symbol(SymbolError::RatFunc(RatFuncError::UnsupportedPoleLocation(_))))
        ));
        assert!(matches!(parse_ratfunc("foo", 4), Err(ExprError::UnknownIdentifier(_))));
        assert!(matches!(parse_ratfunc("xi^(n/3)", 4), Err(ExprError::BadExponent(_))));
    }

    #[test]
    fn n_exponents() {
        let a = parse_ratfunc("(1+xi^2)^(-n/2-1)", 6).unwrap();
        assert_eq!(a, RatFuncXi::one_plus_xi2_pow(-4));
    }

    #[test]
    fn print_parse_fixpoint() {
        for s in ["-i/(4*(xi-i)^2)", "xi/((xi+i)^2*(xi-i)^2)", "6*xi^2-2"] {
            let f = parse_ratfunc(s, 4).unwrap();
            assert_eq!(f.to_text(), s);
        }
        let e = parse_symbol("i/(2*(xi-i))*S_XY - XNYN*CXI*CDXN + HP", &Scope::new(4)).unwrap();
        let again = parse_symbol(&e.to_text(), &Scope::new(4)).unwrap();
        assert_eq!(e, again);
    }
}
