//! A small expression language for the shipped table data: integer literals,
//! the parameter symbols `n m u v m0`, the generator symbols `a b w`
//! (quadratic generator, beta, and omega as an alias for the quadratic
//! generator in the sextic family), and `+ - * / ^ ( )`.

use crate::tower::{TowerElement, TowerSpec};
use crate::{Int, Rat};
use num_traits::Zero;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ExprError {
    #[error("unexpected character {0:?} in expression")]
    BadChar(char),
    #[error("unexpected token at position {0}")]
    BadToken(usize),
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("generator symbol {0:?} is not allowed in a numeric expression")]
    GeneratorInNumeric(String),
    #[error("division by zero in expression")]
    DivisionByZero,
    #[error("division by a non-rational element")]
    NonScalarDivisor,
    #[error("exponent must be a literal nonnegative integer")]
    BadExponent,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(Int),
    Sym(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Neg(Box<Expr>),
}

#[derive(Debug, PartialEq)]
enum Tok {
    Num(Int),
    Sym(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>, ExprError> {
    let mut out = Vec::new();
    let mut it = s.chars().peekable();
    while let Some(&c) = it.peek() {
        match c {
            ' ' | '\t' => {
                it.next();
            }
            '0'..='9' => {
                let mut v = String::new();
                while let Some(&d) = it.peek() {
                    if d.is_ascii_digit() {
                        v.push(d);
                        it.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Num(v.parse::<Int>().unwrap()));
            }
            'a'..='z' | 'A'..='Z' => {
                let mut v = String::new();
                while let Some(&d) = it.peek() {
                    if d.is_ascii_alphanumeric() {
                        v.push(d);
                        it.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Sym(v));
            }
            '+' => {
                it.next();
                out.push(Tok::Plus);
            }
            '-' => {
                it.next();
                out.push(Tok::Minus);
            }
            '*' => {
                it.next();
                out.push(Tok::Star);
            }
            '/' => {
                it.next();
                out.push(Tok::Slash);
            }
            '^' => {
                it.next();
                out.push(Tok::Caret);
            }
            '(' => {
                it.next();
                out.push(Tok::LParen);
            }
            ')' => {
                it.next();
                out.push(Tok::RParen);
            }
            other => return Err(ExprError::BadChar(other)),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            match self.next() {
                Some(Tok::Num(e)) => {
                    let e: u32 = e.to_string().parse().map_err(|_| ExprError::BadExponent)?;
                    return Ok(Expr::Pow(Box::new(base), e));
                }
                _ => return Err(ExprError::BadExponent),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let pos = self.pos;
        match self.next() {
            Some(Tok::Num(v)) => Ok(Expr::Num(v.clone())),
            Some(Tok::Sym(s)) => Ok(Expr::Sym(s.clone())),
            Some(Tok::Minus) => {
                let inner = self.factor()?;
                Ok(Expr::Neg(Box::new(inner)))
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(ExprError::BadToken(self.pos)),
                }
            }
            _ => Err(ExprError::BadToken(pos)),
        }
    }
}

pub fn parse(s: &str) -> Result<Expr, ExprError> {
    let toks = tokenize(s)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(ExprError::BadToken(p.pos));
    }
    Ok(e)
}

/// Numeric bindings for the parameter symbols.
#[derive(Debug, Clone, Default)]
pub struct Bindings {
    pub n: Option<i64>,
    pub m: Option<i64>,
    pub u: Option<i64>,
    pub v: Option<i64>,
    pub m0: Option<i64>,
}

impl Bindings {
    fn lookup(&self, sym: &str) -> Option<i64> {
        match sym {
            "n" => self.n,
            "m" => self.m,
            "u" => self.u,
            "v" => self.v,
            "m0" => self.m0,
            _ => None,
        }
    }
}

/// Evaluate a purely numeric expression to an exact rational.
pub fn eval_rat(e: &Expr, b: &Bindings) -> Result<Rat, ExprError> {
    match e {
        Expr::Num(v) => Ok(Rat::from(v.clone())),
        Expr::Sym(s) => match b.lookup(s) {
            Some(v) => Ok(Rat::from(Int::from(v))),
            None if matches!(s.as_str(), "a" | "b" | "w") => {
                Err(ExprError::GeneratorInNumeric(s.clone()))
            }
            None => Err(ExprError::UnknownSymbol(s.clone())),
        },
        Expr::Add(x, y) => Ok(eval_rat(x, b)? + eval_rat(y, b)?),
        Expr::Sub(x, y) => Ok(eval_rat(x, b)? - eval_rat(y, b)?),
        Expr::Mul(x, y) => Ok(eval_rat(x, b)? * eval_rat(y, b)?),
        Expr::Div(x, y) => {
            let d = eval_rat(y, b)?;
            if d.is_zero() {
                return Err(ExprError::DivisionByZero);
            }
            Ok(eval_rat(x, b)? / d)
        }
        Expr::Pow(x, e) => {
            let base = eval_rat(x, b)?;
            Ok(base.pow(*e as i32))
        }
        Expr::Neg(x) => Ok(-eval_rat(x, b)?),
    }
}

/// Evaluate an expression to a tower element; `a`/`w` map to the quadratic
/// generator, `b` to the partner-field generator.
pub fn eval_element(
    e: &Expr,
    b: &Bindings,
    spec: &Arc<TowerSpec>,
    quad_gen: &TowerElement,
    beta_gen: &TowerElement,
) -> Result<TowerElement, ExprError> {
    Ok(match e {
        Expr::Num(v) => TowerElement::scalar(spec.clone(), Rat::from(v.clone())),
        Expr::Sym(s) => match s.as_str() {
            "a" | "w" => quad_gen.clone(),
            "b" => beta_gen.clone(),
            other => match b.lookup(other) {
                Some(v) => TowerElement::from_int(spec.clone(), v),
                None => return Err(ExprError::UnknownSymbol(s.clone())),
            },
        },
        Expr::Add(x, y) => eval_element(x, b, spec, quad_gen, beta_gen)?
            .add(&eval_element(y, b, spec, quad_gen, beta_gen)?),
        Expr::Sub(x, y) => eval_element(x, b, spec, quad_gen, beta_gen)?
            .sub(&eval_element(y, b, spec, quad_gen, beta_gen)?),
        Expr::Mul(x, y) => eval_element(x, b, spec, quad_gen, beta_gen)?
            .mul(&eval_element(y, b, spec, quad_gen, beta_gen)?),
        Expr::Div(x, y) => {
            let num = eval_element(x, b, spec, quad_gen, beta_gen)?;
            let den = eval_element(y, b, spec, quad_gen, beta_gen)?;
            // table denominators are always scalars
            let ts = den.terms();
            if ts.len() != 1 || ts[0].0 != 0 {
                return Err(ExprError::NonScalarDivisor);
            }
            let d = ts[0].1.clone();
            if d.is_zero() {
                return Err(ExprError::DivisionByZero);
            }
            num.scalar_mul(&(Rat::from(Int::from(1)) / d))
        }
        Expr::Pow(x, e) => eval_element(x, b, spec, quad_gen, beta_gen)?.pow(*e),
        Expr::Neg(x) => eval_element(x, b, spec, quad_gen, beta_gen)?.neg(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::{make_tower, UniPoly};

    #[test]
    fn numeric_eval() {
        let b = Bindings { n: Some(5), m: Some(1), u: None, v: None, m0: None };
        let e = parse("m^2+3*m+9").unwrap();
        assert_eq!(eval_rat(&e, &b).unwrap(), Rat::from(Int::from(13)));
        let e = parse("27*m^2/2").unwrap();
        assert_eq!(eval_rat(&e, &b).unwrap(), Rat::new(Int::from(27), Int::from(2)));
        let e = parse("-64*n^3").unwrap();
        assert_eq!(eval_rat(&e, &b).unwrap(), Rat::from(Int::from(-8000)));
    }

    #[test]
    fn element_eval() {
        let spec = make_tower(vec![
            UniPoly::from_int_coeffs(&[-5, 0, 1]),
            UniPoly::from_int_coeffs(&[-2, 0, 0, 1]),
        ])
        .unwrap();
        let a = TowerElement::generator(spec.clone(), 0);
        let beta = TowerElement::generator(spec.clone(), 1);
        let b = Bindings { n: Some(5), m: Some(2), u: None, v: None, m0: None };
        let e = parse("(a+1)/2").unwrap();
        let v = eval_element(&e, &b, &spec, &a, &beta).unwrap();
        let expect = a.add(&TowerElement::one(spec.clone())).scalar_mul(&Rat::new(Int::from(1), Int::from(2)));
        assert_eq!(v, expect);
        // b^3 reduces to m = 2
        let e = parse("b^3").unwrap();
        let v = eval_element(&e, &b, &spec, &a, &beta).unwrap();
        assert_eq!(v, TowerElement::from_int(spec.clone(), 2));
    }
}
