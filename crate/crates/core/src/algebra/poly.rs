use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use smallvec::SmallVec;

use super::symbols::{Symbol, SymbolTable};
use super::{AlgebraError, Rational};

/// Exponent vector with its cached total degree.
///
/// The derived ordering compares total degree first and then the exponents
/// lexicographically in registration order, which is exactly graded-lex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    deg: u32,
    exps: SmallVec<[u16; 16]>,
}

impl Monomial {
    pub fn one(width: usize) -> Self {
        Monomial {
            deg: 0,
            exps: SmallVec::from_elem(0, width),
        }
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        let deg = exps.iter().map(|&e| e as u32).sum();
        Monomial {
            deg,
            exps: SmallVec::from_slice(exps),
        }
    }

    pub fn var(width: usize, idx: usize, power: u16) -> Self {
        let mut m = Monomial::one(width);
        m.exps[idx] = power;
        m.deg = power as u32;
        m
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    pub fn total_degree(&self) -> u32 {
        self.deg
    }

    pub fn exponent(&self, idx: usize) -> u16 {
        self.exps[idx]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps: SmallVec<[u16; 16]> = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
            .collect();
        Monomial {
            deg: self.deg + other.deg,
            exps,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let exps: SmallVec<[u16; 16]> = other
            .exps
            .iter()
            .zip(self.exps.iter())
            .map(|(b, a)| b - a)
            .collect();
        Monomial {
            deg: other.deg - self.deg,
            exps,
        }
    }

    fn with_exponent(&self, idx: usize, e: u16) -> Monomial {
        let mut m = self.clone();
        m.deg = m.deg - m.exps[idx] as u32 + e as u32;
        m.exps[idx] = e;
        m
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
#[derive(Clone, Debug)]
pub struct MultiPoly {
    table: Arc<SymbolTable>,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        same_table(&self.table, &other.table) && self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

pub(crate) fn same_table(a: &Arc<SymbolTable>, b: &Arc<SymbolTable>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Default ceiling on intermediate polynomial size for symbolic checks.
pub const DEFAULT_TERM_CAP: usize = 2_000_000;

impl MultiPoly {
    pub fn zero(table: &Arc<SymbolTable>) -> Self {
        MultiPoly {
            table: table.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(table: &Arc<SymbolTable>, c: Rational) -> Self {
        let mut p = MultiPoly::zero(table);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(table.len()), c);
        }
        p
    }

    pub fn one(table: &Arc<SymbolTable>) -> Self {
        MultiPoly::constant(table, Rational::one())
    }

    pub fn from_int(table: &Arc<SymbolTable>, c: i64) -> Self {
        MultiPoly::constant(table, Rational::from_integer(BigInt::from(c)))
    }

    pub fn var(table: &Arc<SymbolTable>, name: &str) -> Result<Self, AlgebraError> {
        let idx = table.index(name)?;
        Ok(MultiPoly::var_index(table, idx))
    }

    pub fn var_index(table: &Arc<SymbolTable>, idx: usize) -> Self {
        let mut p = MultiPoly::zero(table);
        p.terms
            .insert(Monomial::var(table.len(), idx, 1), Rational::one());
        p
    }

    pub fn monomial(table: &Arc<SymbolTable>, m: Monomial, c: Rational) -> Self {
        assert_eq!(m.exps.len(), table.len(), "monomial width");
        let mut p = MultiPoly::zero(table);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(
        table: &Arc<SymbolTable>,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut p = MultiPoly::zero(table);
        for (m, c) in terms {
            assert_eq!(m.exps.len(), table.len(), "monomial width");
            p.add_term(m, c);
        }
        p
    }

    pub fn table(&self) -> &Arc<SymbolTable> {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.deg == 0)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.deg == 0 {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.deg).max()
    }

    pub fn degree_in(&self, idx: usize) -> Option<u16> {
        self.terms.keys().map(|m| m.exps[idx]).max()
    }

    pub fn min_degree_in(&self, idx: usize) -> Option<u16> {
        self.terms.keys().map(|m| m.exps[idx]).min()
    }

    /// Total degree counting only the listed symbols.
    pub fn degree_in_vars(&self, idxs: &[usize]) -> Option<u32> {
        self.terms
            .keys()
            .map(|m| idxs.iter().map(|&i| m.exps[i] as u32).sum())
            .max()
    }

    /// Symbol indices that actually occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.table.len())
            .filter(|&i| self.terms.keys().any(|m| m.exps[i] > 0))
            .collect()
    }

    pub fn mentions(&self, idx: usize) -> bool {
        self.terms.keys().any(|m| m.exps[idx] > 0)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_table(&self, other: &MultiPoly) -> Result<(), AlgebraError> {
        if same_table(&self.table, &other.table) {
            Ok(())
        } else {
            Err(AlgebraError::TableMismatch)
        }
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        self.check_table(other)?;
        let (mut big, small) = if self.len() >= other.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        Ok(big)
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        self.check_table(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        self.checked_mul(other, usize::MAX)
    }

    /// Product that aborts with [`AlgebraError::Blowup`] when the result
    /// would exceed `cap` terms.
    pub fn checked_mul(&self, other: &MultiPoly, cap: usize) -> Result<MultiPoly, AlgebraError> {
        self.check_table(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(MultiPoly::zero(&self.table));
        }
        if let Some(c) = other.constant_value() {
            return Ok(self.scale(&c));
        }
        if let Some(c) = self.constant_value() {
            return Ok(other.scale(&c));
        }
        let (a, b) = if self.len() >= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        if b.len() == 1 {
            let (m, c) = b.terms.iter().next().unwrap();
            return Ok(a.mul_term(m, c));
        }
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(a.len().saturating_mul(2));
        for (mb, cb) in &b.terms {
            for (ma, ca) in &a.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.entry(m) {
                    std::collections::hash_map::Entry::Vacant(v) => {
                        v.insert(c);
                    }
                    std::collections::hash_map::Entry::Occupied(mut o) => {
                        *o.get_mut() += c;
                    }
                }
            }
            if acc.len() > cap {
                return Err(AlgebraError::Blowup {
                    terms: acc.len(),
                    cap,
                });
            }
        }
        let terms: BTreeMap<Monomial, Rational> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if terms.len() > cap {
            return Err(AlgebraError::Blowup {
                terms: terms.len(),
                cap,
            });
        }
        Ok(MultiPoly {
            table: self.table.clone(),
            terms,
        })
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.table);
        }
        let terms = self
            .terms
            .iter()
            .map(|(mm, cc)| (mm.mul(m), cc * c))
            .collect();
        MultiPoly {
            table: self.table.clone(),
            terms,
        }
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.table);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, cc)| (m.clone(), cc * c))
            .collect();
        MultiPoly {
            table: self.table.clone(),
            terms,
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        self.checked_pow(e, usize::MAX).expect("uncapped power")
    }

    pub fn checked_pow(&self, mut e: u32, cap: usize) -> Result<MultiPoly, AlgebraError> {
        let mut result = MultiPoly::one(&self.table);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.checked_mul(&base, cap)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base, cap)?;
            }
        }
        Ok(result)
    }

    /// Formal partial derivative.
    pub fn differentiate(&self, v: Symbol) -> MultiPoly {
        let idx = v.0;
        let mut out = MultiPoly::zero(&self.table);
        for (m, c) in &self.terms {
            let e = m.exps[idx];
            if e == 0 {
                continue;
            }
            let nm = m.with_exponent(idx, e - 1);
            out.add_term(nm, c * Rational::from_integer(BigInt::from(e)));
        }
        out
    }

    /// Exact division. `Ok(None)` means `d` does not divide `self`.
    ///
    /// Uses single-divisor reduction in graded-lex order: if `d` divides the
    /// remainder, its leading monomial must divide the remainder's leading
    /// monomial, so the first failure is conclusive.
    pub fn exact_divide(&self, d: &MultiPoly) -> Result<Option<MultiPoly>, AlgebraError> {
        self.check_table(d)?;
        let (dm, dc) = match d.leading_term() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(AlgebraError::DivisionByZeroPolynomial),
        };
        if let Some(c) = d.constant_value() {
            return Ok(Some(self.scale(&(Rational::one() / c))));
        }
        let mut r = self.clone();
        let mut q = MultiPoly::zero(&self.table);
        let dc_inv = Rational::one() / dc;
        while let Some((rm, rc)) = r.leading_term() {
            if !dm.divides(rm) {
                return Ok(None);
            }
            let qm = dm.quotient_of(rm);
            let qc = rc * &dc_inv;
            for (m, c) in &d.terms {
                r.add_term(m.mul(&qm), -(c * &qc));
            }
            q.add_term(qm, qc);
        }
        Ok(Some(q))
    }

    /// Exact rational value at a full assignment (indexed by symbol).
    pub fn evaluate(&self, point: &[Option<Rational>]) -> Result<Rational, AlgebraError> {
        let mut powers: Vec<Vec<Rational>> = vec![Vec::new(); self.table.len()];
        for idx in self.support() {
            let v = point
                .get(idx)
                .and_then(|v| v.clone())
                .ok_or_else(|| AlgebraError::Unassigned(self.table.name(idx).to_string()))?;
            let maxd = self.degree_in(idx).unwrap_or(0) as usize;
            let mut pw = Vec::with_capacity(maxd + 1);
            pw.push(Rational::one());
            for k in 1..=maxd {
                let next = &pw[k - 1] * &v;
                pw.push(next);
            }
            powers[idx] = pw;
        }
        let mut sum = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    term *= &powers[i][e as usize];
                }
            }
            sum += term;
        }
        Ok(sum)
    }

    /// Floating evaluation; symbols without a value count as zero.
    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        let mut sum = 0.0;
        for (m, c) in &self.terms {
            let mut term = c.to_f64().unwrap_or(f64::NAN);
            for (i, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    term *= point[i].powi(e as i32);
                }
            }
            sum += term;
        }
        sum
    }

    /// Substitute values for some symbols, leaving the rest symbolic.
    pub fn specialize(&self, values: &[(usize, Rational)]) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.table);
        for (m, c) in &self.terms {
            let mut nm = m.clone();
            let mut nc = c.clone();
            for (idx, v) in values {
                let e = nm.exps[*idx];
                if e > 0 {
                    nc *= pow_rational(v, e as u32);
                    nm = nm.with_exponent(*idx, 0);
                }
            }
            out.add_term(nm, nc);
        }
        out
    }

    /// Simultaneous polynomial substitution `symbol -> polynomial`.
    pub fn substitute_poly(&self, subs: &[(usize, MultiPoly)]) -> MultiPoly {
        self.checked_substitute_poly(subs, usize::MAX)
            .expect("uncapped substitution")
    }

    pub fn checked_substitute_poly(
        &self,
        subs: &[(usize, MultiPoly)],
        cap: usize,
    ) -> Result<MultiPoly, AlgebraError> {
        for (_, p) in subs {
            self.check_table(p)?;
        }
        let mut cache: HashMap<(usize, u16), MultiPoly> = HashMap::new();
        let mut out: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in &self.terms {
            let mut base = m.clone();
            let mut factor: Option<MultiPoly> = None;
            for (k, (idx, p)) in subs.iter().enumerate() {
                let e = m.exps[*idx];
                if e == 0 {
                    continue;
                }
                base = base.with_exponent(*idx, 0);
                let pw = cache
                    .entry((k, e))
                    .or_insert_with(|| p.pow(e as u32))
                    .clone();
                factor = Some(match factor {
                    None => pw,
                    Some(f) => f.checked_mul(&pw, cap)?,
                });
            }
            match factor {
                None => {
                    *out.entry(base).or_insert_with(Rational::zero) += c.clone();
                }
                Some(f) => {
                    for (fm, fc) in &f.terms {
                        *out.entry(fm.mul(&base)).or_insert_with(Rational::zero) += fc * c;
                    }
                }
            }
            if out.len() > cap {
                return Err(AlgebraError::Blowup {
                    terms: out.len(),
                    cap,
                });
            }
        }
        Ok(MultiPoly {
            table: self.table.clone(),
            terms: out.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    /// Group terms by the exponent of one symbol: `self = sum_k coeff_k * s^k`.
    pub fn coefficients_in(&self, idx: usize) -> BTreeMap<u16, MultiPoly> {
        let mut out: BTreeMap<u16, MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exps[idx];
            out.entry(e)
                .or_insert_with(|| MultiPoly::zero(&self.table))
                .add_term(m.with_exponent(idx, 0), c.clone());
        }
        out
    }

    /// Re-express in another table, matching symbols by name.
    pub fn embed(&self, target: &Arc<SymbolTable>) -> Result<MultiPoly, AlgebraError> {
        let mut map = Vec::with_capacity(self.table.len());
        for name in self.table.names() {
            map.push(target.try_index(name));
        }
        let mut out = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut exps: SmallVec<[u16; 16]> = SmallVec::from_elem(0, target.len());
            for (i, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => exps[j] = e,
                    None => {
                        return Err(AlgebraError::UnknownSymbol(self.table.name(i).to_string()))
                    }
                }
            }
            out.add_term(Monomial { deg: m.deg, exps }, c.clone());
        }
        Ok(out)
    }

    /// Multiply by the least common multiple of coefficient denominators
    /// so every coefficient is an integer; returns the multiplier too.
    pub fn clear_denominators(&self) -> (MultiPoly, BigInt) {
        let mut l = BigInt::one();
        for c in self.terms.values() {
            l = num_integer::Integer::lcm(&l, c.denom());
        }
        (self.scale(&Rational::from_integer(l.clone())), l)
    }
}

pub(crate) fn pow_rational(v: &Rational, e: u32) -> Rational {
    num_traits::pow::pow(v.clone(), e as usize)
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_add(rhs).expect("symbol table mismatch")
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_sub(rhs).expect("symbol table mismatch")
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_mul(rhs).expect("symbol table mismatch")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

/// Exact rational as `p` or `p/q`.
pub fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Render a monomial as `x^2*y`, or `""` for the unit monomial.
pub(crate) fn fmt_monomial(table: &SymbolTable, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exps.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(table.name(i).to_string()),
            _ => parts.push(format!("{}^{}", table.name(i), e)),
        }
    }
    parts.join("*")
}

impl fmt::Display for MultiPoly {
    /// Terms are printed from the leading (graded-lex largest) monomial down.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            let mono = fmt_monomial(&self.table, m);
            let body = if mono.is_empty() {
                fmt_rational(&abs)
            } else if abs.is_one() {
                mono
            } else {
                format!("{}*{}", fmt_rational(&abs), mono)
            };
            match (first, neg) {
                (true, true) => write!(f, "-{}", body)?,
                (true, false) => write!(f, "{}", body)?,
                (false, true) => write!(f, " - {}", body)?,
                (false, false) => write!(f, " + {}", body)?,
            }
            first = false;
        }
        Ok(())
    }
}
