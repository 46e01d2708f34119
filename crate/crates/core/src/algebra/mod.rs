//! Exact arithmetic kernel: rationals, sparse polynomials, rational
//! functions, differentiation, exact division, limits and Jacobians.

mod parse;
mod poly;
mod ratfunc;
pub mod symbols;

use num_rational::BigRational;
use thiserror::Error;

pub use parse::{parse_decimal, parse_poly, parse_rational, parse_rf, rat};
pub use poly::{Monomial, MultiPoly, DEFAULT_TERM_CAP};
pub use ratfunc::{jacobian_det, rf_equal, substitute_into_poly, LimitPoint, RationalFunc};
pub use symbols::{appendix_table, main_table, reduced_table, Symbol, SymbolKind, SymbolTable};

pub use poly::fmt_rational;

/// Arbitrary-precision rational scalar, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum AlgebraError {
    #[error("symbol '{0}' registered twice")]
    DuplicateSymbol(String),
    #[error("unknown symbol '{0}'")]
    UnknownSymbol(String),
    #[error("operands use different symbol tables")]
    TableMismatch,
    #[error("negative exponent on a polynomial")]
    NegativeExponent,
    #[error("division by the zero polynomial")]
    DivisionByZeroPolynomial,
    #[error("denominator vanishes at the evaluation point")]
    DivByZero,
    #[error("no value assigned to '{0}'")]
    Unassigned(String),
    #[error("intermediate result has {terms} terms, above the cap of {cap}")]
    Blowup { terms: usize, cap: usize },
    #[error("limit in '{0}' diverges")]
    Diverges(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// The arithmetic operations exposed by [`poly_op`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOpKind {
    Add,
    Sub,
    Mul,
    Pow,
    Scale,
}

/// Right operand of [`poly_op`].
#[derive(Debug, Clone)]
pub enum Operand<'a> {
    Poly(&'a MultiPoly),
    Scalar(&'a Rational),
    Exponent(i64),
}

/// Checked entry point for polynomial arithmetic.
pub fn poly_op(kind: PolyOpKind, a: &MultiPoly, b: Operand<'_>) -> Result<MultiPoly, AlgebraError> {
    match (kind, b) {
        (PolyOpKind::Add, Operand::Poly(b)) => a.try_add(b),
        (PolyOpKind::Sub, Operand::Poly(b)) => a.try_sub(b),
        (PolyOpKind::Mul, Operand::Poly(b)) => a.try_mul(b),
        (PolyOpKind::Scale, Operand::Scalar(c)) => Ok(a.scale(c)),
        (PolyOpKind::Pow, Operand::Exponent(e)) => {
            if e < 0 {
                Err(AlgebraError::NegativeExponent)
            } else {
                Ok(a.pow(e as u32))
            }
        }
        (k, _) => Err(AlgebraError::Parse(format!("operand does not fit {:?}", k))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_op_dispatch() {
        let t = main_table();
        let x = parse_poly(&t, "x").unwrap();
        let y = parse_poly(&t, "y").unwrap();
        assert_eq!(
            poly_op(PolyOpKind::Add, &x, Operand::Poly(&y)).unwrap(),
            parse_poly(&t, "x+y").unwrap()
        );
        assert_eq!(
            poly_op(PolyOpKind::Scale, &x, Operand::Scalar(&rat(1, 2))).unwrap(),
            parse_poly(&t, "x/2").unwrap()
        );
        assert_eq!(
            poly_op(PolyOpKind::Pow, &x, Operand::Exponent(-1)),
            Err(AlgebraError::NegativeExponent)
        );
        let other = parse_poly(&appendix_table(), "x").unwrap();
        assert_eq!(
            poly_op(PolyOpKind::Mul, &x, Operand::Poly(&other)),
            Err(AlgebraError::TableMismatch)
        );
    }
}
