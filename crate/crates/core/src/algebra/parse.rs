//! A small infix reader for transcribing formulas.
//!
//! Accepts `+ - * / ^`, parentheses, integer and decimal literals, and the
//! symbol names of the target table. Juxtaposition multiplies, so
//! `2 x (y - 1)` reads as `2*x*(y-1)`; adjacent names need a space.
//! Exponents must be integer literals (negative exponents are allowed on
//! rational functions).

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use super::poly::MultiPoly;
use super::ratfunc::RationalFunc;
use super::symbols::SymbolTable;
use super::{AlgebraError, Rational};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<Tok>, AlgebraError> {
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Num(parse_decimal(&text)?));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(AlgebraError::Parse(format!("unexpected character '{}'", c)));
        }
    }
    Ok(out)
}

/// Exact value of an unsigned decimal literal such as `12` or `0.25`.
pub fn parse_decimal(text: &str) -> Result<Rational, AlgebraError> {
    let bad = || AlgebraError::Parse(format!("bad number '{}'", text));
    let (int_part, frac_part) = match text.split_once('.') {
        Some((a, b)) => (a, b),
        None => (text, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let digits = format!("{}{}", int_part, frac_part);
    let n: BigInt = digits.parse().map_err(|_| bad())?;
    let d = num_traits::pow::pow(BigInt::from(10), frac_part.len());
    Ok(Rational::new(n, d))
}

/// Parse an exact rational written as `p/q`, a decimal, or an integer,
/// optionally signed.
pub fn parse_rational(text: &str) -> Result<Rational, AlgebraError> {
    let text = text.trim();
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, text.strip_prefix('+').unwrap_or(text).trim()),
    };
    let v = match body.split_once('/') {
        Some((a, b)) => {
            let d = parse_decimal(b.trim())?;
            if d.is_zero() {
                return Err(AlgebraError::Parse(format!(
                    "zero denominator in '{}'",
                    text
                )));
            }
            parse_decimal(a.trim())? / d
        }
        None => parse_decimal(body)?,
    };
    Ok(if neg { -v } else { v })
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    table: &'a Arc<SymbolTable>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RationalFunc, AlgebraError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                let rhs = self.term()?;
                acc = acc.checked_add(&rhs, usize::MAX)?;
            } else if self.eat('-') {
                let rhs = self.term()?;
                acc = acc.checked_sub(&rhs, usize::MAX)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunc, AlgebraError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let rhs = self.unary()?;
                acc = acc.checked_mul(&rhs, usize::MAX)?;
            } else if self.eat('/') {
                let rhs = self.unary()?;
                acc = acc.checked_div(&rhs, usize::MAX)?;
            } else if matches!(
                self.peek(),
                Some(Tok::Ident(_)) | Some(Tok::Num(_)) | Some(Tok::Op('('))
            ) {
                // juxtaposition is multiplication: `2 x (y - 1)`
                let rhs = self.power()?;
                acc = acc.checked_mul(&rhs, usize::MAX)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunc, AlgebraError> {
        if self.eat('-') {
            return Ok(self.unary()?.negate());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalFunc, AlgebraError> {
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let e = match self.peek().cloned() {
                Some(Tok::Num(n)) if n.is_integer() => {
                    self.pos += 1;
                    n.to_integer()
                }
                _ => {
                    return Err(AlgebraError::Parse(
                        "exponent must be an integer literal".into(),
                    ))
                }
            };
            let e: i32 = e
                .try_into()
                .map_err(|_| AlgebraError::Parse("exponent too large".into()))?;
            return base.pow(if neg { -e } else { e });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RationalFunc, AlgebraError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(RationalFunc::constant(self.table, n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                RationalFunc::var(self.table, &name)
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(AlgebraError::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            other => Err(AlgebraError::Parse(format!("unexpected token {:?}", other))),
        }
    }
}

pub fn parse_rf(table: &Arc<SymbolTable>, src: &str) -> Result<RationalFunc, AlgebraError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        table,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(AlgebraError::Parse(format!(
            "trailing input at token {}",
            p.pos
        )));
    }
    Ok(e)
}

/// Parse an expression that must be polynomial.
pub fn parse_poly(table: &Arc<SymbolTable>, src: &str) -> Result<MultiPoly, AlgebraError> {
    let r = parse_rf(table, src)?;
    match r.as_polynomial()? {
        Some(p) => Ok(p),
        None => Err(AlgebraError::Parse(format!("not a polynomial: {}", src))),
    }
}

/// Shorthand for an exact rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::symbols::main_table;

    #[test]
    fn precedence_and_unary_minus() {
        let t = main_table();
        let a = parse_poly(&t, "-x^2 + 2*x*y - 3").unwrap();
        let b = parse_poly(&t, "-(x^2) + (2*x)*y + (-3)").unwrap();
        assert_eq!(a, b);
        let c = parse_poly(&t, "2 x (y - 1) + x^2 y").unwrap();
        assert_eq!(c, parse_poly(&t, "2*x*y - 2*x + x^2*y").unwrap());
    }

    #[test]
    fn rationals_and_decimals() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-0.25").unwrap(), rat(-1, 4));
        assert_eq!(parse_rational("7").unwrap(), rat(7, 1));
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn errors() {
        let t = main_table();
        assert!(parse_rf(&t, "x +").is_err());
        assert!(parse_rf(&t, "q").is_err());
        assert!(parse_poly(&t, "1/x").is_err());
        assert!(parse_rf(&t, "(x").is_err());
    }
}
