use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::poly::{same_table, MultiPoly};
use super::symbols::{Symbol, SymbolTable};
use super::{AlgebraError, Rational};

/// Quotient of two polynomials. Never reduced by a GCD: equality is decided
/// by cross-multiplication and polynomiality by exact division.
#[derive(Clone, Debug)]
pub struct RationalFunc {
    num: MultiPoly,
    den: MultiPoly,
}

/// Where a distinguished parameter is sent in [`RationalFunc::param_limit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitPoint {
    Zero,
    Infinity,
}

impl RationalFunc {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, AlgebraError> {
        if !same_table(num.table(), den.table()) {
            return Err(AlgebraError::TableMismatch);
        }
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZeroPolynomial);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: MultiPoly, den: MultiPoly) -> Self {
        if num.is_zero() {
            let one = MultiPoly::one(num.table());
            return RationalFunc { num, den: one };
        }
        if let Some(c) = den.constant_value() {
            if !c.is_one() {
                let num = num.scale(&(Rational::one() / c));
                let one = MultiPoly::one(num.table());
                return RationalFunc { num, den: one };
            }
        }
        RationalFunc { num, den }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let den = MultiPoly::one(p.table());
        RationalFunc { num: p, den }
    }

    pub fn zero(table: &Arc<SymbolTable>) -> Self {
        Self::from_poly(MultiPoly::zero(table))
    }

    pub fn one(table: &Arc<SymbolTable>) -> Self {
        Self::from_poly(MultiPoly::one(table))
    }

    pub fn constant(table: &Arc<SymbolTable>, c: Rational) -> Self {
        Self::from_poly(MultiPoly::constant(table, c))
    }

    pub fn var(table: &Arc<SymbolTable>, name: &str) -> Result<Self, AlgebraError> {
        MultiPoly::var(table, name).map(Self::from_poly)
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn table(&self) -> &Arc<SymbolTable> {
        self.num.table()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.constant_value().is_some()
    }

    /// The polynomial this function equals, if the denominator divides the
    /// numerator exactly.
    pub fn as_polynomial(&self) -> Result<Option<MultiPoly>, AlgebraError> {
        self.num.exact_divide(&self.den)
    }

    pub fn checked_add(&self, other: &Self, cap: usize) -> Result<Self, AlgebraError> {
        if self.den == other.den {
            return Ok(Self::normalized(
                self.num.try_add(&other.num)?,
                self.den.clone(),
            ));
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let a = self.num.checked_mul(&other.den, cap)?;
        let b = other.num.checked_mul(&self.den, cap)?;
        let den = self.den.checked_mul(&other.den, cap)?;
        Ok(Self::normalized(a.try_add(&b)?, den))
    }

    pub fn checked_sub(&self, other: &Self, cap: usize) -> Result<Self, AlgebraError> {
        self.checked_add(&other.negate(), cap)
    }

    pub fn checked_mul(&self, other: &Self, cap: usize) -> Result<Self, AlgebraError> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.table()));
        }
        // cheap cancellation of a matching factor
        if self.den == other.num {
            return Ok(Self::normalized(self.num.clone(), other.den.clone()));
        }
        if self.num == other.den {
            return Ok(Self::normalized(other.num.clone(), self.den.clone()));
        }
        let num = self.num.checked_mul(&other.num, cap)?;
        let den = self.den.checked_mul(&other.den, cap)?;
        Ok(Self::normalized(num, den))
    }

    pub fn checked_div(&self, other: &Self, cap: usize) -> Result<Self, AlgebraError> {
        self.checked_mul(&other.recip()?, cap)
    }

    pub fn recip(&self) -> Result<Self, AlgebraError> {
        if self.num.is_zero() {
            return Err(AlgebraError::DivisionByZeroPolynomial);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn negate(&self) -> Self {
        RationalFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::normalized(self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, e: i32) -> Result<Self, AlgebraError> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(Self::normalized(base.num.pow(k), base.den.pow(k)))
    }

    /// Quotient rule.
    pub fn differentiate(&self, v: Symbol) -> Self {
        let dn = self.num.differentiate(v);
        if self.den.constant_value().is_some() {
            return Self::normalized(dn, self.den.clone());
        }
        let dd = self.den.differentiate(v);
        if dd.is_zero() {
            return Self::normalized(dn, self.den.clone());
        }
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        Self::normalized(num, self.den.pow(2))
    }

    pub fn evaluate(&self, point: &[Option<Rational>]) -> Result<Rational, AlgebraError> {
        let d = self.den.evaluate(point)?;
        if d.is_zero() {
            return Err(AlgebraError::DivByZero);
        }
        Ok(self.num.evaluate(point)? / d)
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.num.eval_f64(point) / self.den.eval_f64(point)
    }

    /// `num1*den2 - num2*den1`; zero iff the two functions are equal.
    pub fn cross_difference(&self, other: &Self, cap: usize) -> Result<MultiPoly, AlgebraError> {
        if self.den == other.den {
            return self.num.try_sub(&other.num);
        }
        let a = self.num.checked_mul(&other.den, cap)?;
        let b = other.num.checked_mul(&self.den, cap)?;
        a.try_sub(&b)
    }

    pub fn specialize(&self, values: &[(usize, Rational)]) -> Result<Self, AlgebraError> {
        RationalFunc::new(self.num.specialize(values), self.den.specialize(values))
    }

    pub fn substitute_poly(
        &self,
        subs: &[(usize, MultiPoly)],
        cap: usize,
    ) -> Result<Self, AlgebraError> {
        let num = self.num.checked_substitute_poly(subs, cap)?;
        let den = self.den.checked_substitute_poly(subs, cap)?;
        RationalFunc::new(num, den)
    }

    /// Simultaneous substitution of rational functions for symbols.
    pub fn substitute(
        &self,
        subs: &[(usize, RationalFunc)],
        cap: usize,
    ) -> Result<Self, AlgebraError> {
        let n = substitute_into_poly(&self.num, subs, cap)?;
        if self.den.constant_value().is_some() {
            return Ok(n.scale(&(Rational::one() / self.den.constant_value().unwrap())));
        }
        let d = substitute_into_poly(&self.den, subs, cap)?;
        n.checked_div(&d, cap)
    }

    pub fn embed(&self, target: &Arc<SymbolTable>) -> Result<Self, AlgebraError> {
        RationalFunc::new(self.num.embed(target)?, self.den.embed(target)?)
    }

    /// Limit as one distinguished symbol goes to zero or infinity, by
    /// comparing extreme degrees of numerator and denominator in that symbol.
    pub fn param_limit(&self, s: Symbol, point: LimitPoint) -> Result<Self, AlgebraError> {
        if self.num.is_zero() {
            return Ok(self.clone());
        }
        let nc = self.num.coefficients_in(s.0);
        let dc = self.den.coefficients_in(s.0);
        let pick = |m: &std::collections::BTreeMap<u16, MultiPoly>| -> (u16, MultiPoly) {
            let (k, c) = match point {
                LimitPoint::Infinity => m.iter().next_back().unwrap(),
                LimitPoint::Zero => m.iter().next().unwrap(),
            };
            (*k, c.clone())
        };
        let (kn, cn) = pick(&nc);
        let (kd, cd) = pick(&dc);
        let diverges = match point {
            LimitPoint::Infinity => kn > kd,
            LimitPoint::Zero => kn < kd,
        };
        if diverges {
            return Err(AlgebraError::Diverges(self.table().name(s.0).to_string()));
        }
        if kn != kd {
            return Ok(Self::zero(self.table()));
        }
        RationalFunc::new(cn, cd)
    }
}

/// Substitute rational functions into a polynomial over a common
/// denominator: each substituted symbol `v -> n/d` of degree `D` in `p`
/// contributes `d^D` to the denominator.
pub fn substitute_into_poly(
    p: &MultiPoly,
    subs: &[(usize, RationalFunc)],
    cap: usize,
) -> Result<RationalFunc, AlgebraError> {
    let table = p.table().clone();
    for (_, r) in subs {
        if !same_table(r.table(), &table) {
            return Err(AlgebraError::TableMismatch);
        }
    }
    let active: Vec<&(usize, RationalFunc)> = subs.iter().filter(|(i, _)| p.mentions(*i)).collect();
    if active.is_empty() {
        return Ok(RationalFunc::from_poly(p.clone()));
    }
    let maxdeg: Vec<u16> = active
        .iter()
        .map(|(i, _)| p.degree_in(*i).unwrap_or(0))
        .collect();

    // group the terms of p by their exponent pattern in the substituted symbols
    let mut groups: HashMap<Vec<u16>, Vec<(super::poly::Monomial, Rational)>> = HashMap::new();
    for (m, c) in p.terms() {
        let key: Vec<u16> = active.iter().map(|(i, _)| m.exponent(*i)).collect();
        let mut exps = m.exponents().to_vec();
        for (i, _) in &active {
            exps[*i] = 0;
        }
        groups
            .entry(key)
            .or_default()
            .push((super::poly::Monomial::from_exponents(&exps), c.clone()));
    }

    let mut num_pows: Vec<Vec<MultiPoly>> = Vec::new();
    let mut den_pows: Vec<Vec<MultiPoly>> = Vec::new();
    for (k, (_, r)) in active.iter().enumerate() {
        let mut np = vec![MultiPoly::one(&table)];
        let mut dp = vec![MultiPoly::one(&table)];
        for e in 1..=maxdeg[k] as usize {
            np.push(np[e - 1].checked_mul(r.num(), cap)?);
            dp.push(dp[e - 1].checked_mul(r.den(), cap)?);
        }
        num_pows.push(np);
        den_pows.push(dp);
    }

    let mut keys: Vec<&Vec<u16>> = groups.keys().collect();
    keys.sort();
    let mut total = MultiPoly::zero(&table);
    for key in keys {
        let coeff = MultiPoly::from_terms(&table, groups[key].iter().cloned());
        let mut term = coeff;
        for (k, &e) in key.iter().enumerate() {
            let e = e as usize;
            term = term.checked_mul(&num_pows[k][e], cap)?;
            term = term.checked_mul(&den_pows[k][maxdeg[k] as usize - e], cap)?;
        }
        total = total.try_add(&term)?;
        if total.len() > cap {
            return Err(AlgebraError::Blowup {
                terms: total.len(),
                cap,
            });
        }
    }
    let mut den = MultiPoly::one(&table);
    for (k, _) in active.iter().enumerate() {
        den = den.checked_mul(&den_pows[k][maxdeg[k] as usize], cap)?;
    }
    RationalFunc::new(total, den)
}

/// Exact identity test by cross-multiplication.
pub fn rf_equal(a: &RationalFunc, b: &RationalFunc) -> bool {
    a.cross_difference(b, usize::MAX)
        .map(|d| d.is_zero())
        .unwrap_or(false)
}

/// Determinant of the Jacobian matrix of `components` with respect to `vars`.
pub fn jacobian_det(
    components: &[RationalFunc],
    vars: &[Symbol],
) -> Result<RationalFunc, AlgebraError> {
    assert_eq!(components.len(), vars.len(), "square Jacobian");
    let m: Vec<Vec<RationalFunc>> = components
        .iter()
        .map(|c| vars.iter().map(|v| c.differentiate(*v)).collect())
        .collect();
    determinant(&m)
}

fn determinant(m: &[Vec<RationalFunc>]) -> Result<RationalFunc, AlgebraError> {
    let n = m.len();
    let table = m[0][0].table().clone();
    if n == 1 {
        return Ok(m[0][0].clone());
    }
    let mut acc = RationalFunc::zero(&table);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<RationalFunc>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let mut term = m[0][j].checked_mul(&determinant(&minor)?, usize::MAX)?;
        if j % 2 == 1 {
            term = term.negate();
        }
        acc = acc.checked_add(&term, usize::MAX)?;
    }
    Ok(acc)
}

impl PartialEq for RationalFunc {
    /// Mathematical equality (cross-multiplication), not structural.
    fn eq(&self, other: &Self) -> bool {
        rf_equal(self, other)
    }
}

impl fmt::Display for RationalFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.constant_value().is_some() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
