//! Birational maps: pointwise application, composition, pullback of vector
//! fields, volume checks and the Poisson-series form of reflections.

mod map;

use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

pub use map::{volume_check, BirationalMap, ChartMap, ParamAction, State};

use crate::algebra::{
    rf_equal, substitute_into_poly, AlgebraError, MultiPoly, Rational, RationalFunc, Symbol,
    SymbolTable,
};
use crate::systems::{self, SystemDef, WeylType};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum BirationalError {
    #[error("{0} is indeterminate at this point")]
    Indeterminate(String),
    #[error("malformed map: {0}")]
    Malformed(String),
    #[error("unknown generator '{0}'")]
    UnknownGenerator(String),
    #[error("series for {name} has a nonzero term at order {bound}")]
    NonTerminating { name: String, bound: usize },
    #[error("{0}")]
    NoSeries(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Constant bracket table `{v_i, v_j}` on the dependent variables.
#[derive(Debug, Clone)]
pub struct PoissonStructure {
    pub table: Arc<SymbolTable>,
    pub vars: Vec<usize>,
    pub matrix: Vec<Vec<i64>>,
}

impl PoissonStructure {
    pub fn is_antisymmetric(&self) -> bool {
        let n = self.vars.len();
        (0..n).all(|i| (0..n).all(|j| self.matrix[i][j] == -self.matrix[j][i]))
    }
}

/// `{f, g} = sum_ij {v_i, v_j} df/dv_i dg/dv_j`.
pub fn poisson_bracket(f: &MultiPoly, g: &MultiPoly, ps: &PoissonStructure) -> MultiPoly {
    let df: Vec<MultiPoly> = ps
        .vars
        .iter()
        .map(|&v| f.differentiate(Symbol(v)))
        .collect();
    let dg: Vec<MultiPoly> = ps
        .vars
        .iter()
        .map(|&v| g.differentiate(Symbol(v)))
        .collect();
    let mut acc = MultiPoly::zero(f.table());
    for (i, row) in ps.matrix.iter().enumerate() {
        for (j, &m) in row.iter().enumerate() {
            if m == 0 || df[i].is_zero() || dg[j].is_zero() {
                continue;
            }
            let term = &df[i] * &dg[j];
            acc = &acc + &term.scale(&Rational::from_integer(BigInt::from(m)));
        }
    }
    acc
}

#[derive(Debug, Clone)]
pub struct PoissonSeriesResult {
    /// Successive nonzero terms, starting with `g` itself.
    pub terms: Vec<RationalFunc>,
    /// Order of the first vanishing bracket.
    pub truncated_at: usize,
    pub total: RationalFunc,
    /// Whether `total` equals the closed-form image of `g`.
    pub matches_map: bool,
}

pub const DEFAULT_SERIES_BOUND: usize = 12;

/// Sum `g + (c/f){f,g} + (c/f)^2/2! {f,{f,g}} + ...` for reflection `index`
/// of `ty` until a bracket vanishes, and compare with the closed form.
pub fn poisson_series_transform(
    ty: WeylType,
    index: usize,
    g: &MultiPoly,
    bound: usize,
) -> Result<PoissonSeriesResult, BirationalError> {
    let form = systems::poisson_form(ty, index)
        .map_err(|e| BirationalError::Malformed(e.to_string()))?
        .ok_or_else(|| {
            BirationalError::NoSeries(format!("{} generator {} has no series form", ty, index))
        })?;
    let ps = systems::poisson_structure(ty);
    let table = g.table().clone();
    let step = form
        .coefficient
        .checked_div(&RationalFunc::from_poly(form.divisor.clone()), usize::MAX)?;
    let mut terms = vec![RationalFunc::from_poly(g.clone())];
    let mut bracket = g.clone();
    let mut weight = RationalFunc::one(&table);
    let mut factorial = Rational::from_integer(BigInt::from(1));
    let mut truncated_at = None;
    for k in 1..=bound {
        bracket = poisson_bracket(&form.divisor, &bracket, &ps);
        if bracket.is_zero() {
            truncated_at = Some(k);
            break;
        }
        weight = weight.checked_mul(&step, usize::MAX)?;
        factorial *= Rational::from_integer(BigInt::from(k));
        let term = weight
            .checked_mul(&RationalFunc::from_poly(bracket.clone()), usize::MAX)?
            .scale(&(Rational::from_integer(BigInt::from(1)) / factorial.clone()));
        terms.push(term);
    }
    let name = ty.generator_names()[index].clone();
    let truncated_at = truncated_at.ok_or(BirationalError::NonTerminating {
        name: name.clone(),
        bound,
    })?;
    let mut total = RationalFunc::zero(&table);
    for t in &terms {
        total = total.checked_add(t, usize::MAX)?;
    }
    let map =
        systems::generator(ty, &name).map_err(|e| BirationalError::Malformed(e.to_string()))?;
    let subs: Vec<(usize, RationalFunc)> = map
        .vars
        .iter()
        .copied()
        .zip(map.var_images.iter().cloned())
        .collect();
    let image = substitute_into_poly(g, &subs, usize::MAX)?;
    let matches_map = rf_equal(&total, &image);
    Ok(PoissonSeriesResult {
        terms,
        truncated_at,
        total,
        matches_map,
    })
}

/// Time derivative of each image component along `field`:
/// `sum_v du/dv * field_v`.
pub fn pullback_field(
    m: &BirationalMap,
    field: &[RationalFunc],
    cap: usize,
) -> Result<Vec<RationalFunc>, BirationalError> {
    let mut out = Vec::with_capacity(m.var_images.len());
    for img in &m.var_images {
        let mut acc = RationalFunc::zero(&m.table);
        for (&v, f) in m.vars.iter().zip(field) {
            let d = img.differentiate(Symbol(v));
            if d.is_zero() {
                continue;
            }
            acc = acc.checked_add(&d.checked_mul(f, cap)?, cap)?;
        }
        out.push(acc);
    }
    Ok(out)
}

/// The field written in chart coordinates.
pub fn pullback_chart(
    c: &ChartMap,
    sys: &SystemDef,
    cap: usize,
) -> Result<Vec<RationalFunc>, BirationalError> {
    let raw = pullback_field(&c.map, &sys.field(), cap)?;
    let inv = c.inverse_substitution();
    raw.iter().map(|r| Ok(r.substitute(&inv, cap)?)).collect()
}

/// A word of generators evaluated pointwise.
#[derive(Debug, Clone)]
pub struct SampledWord {
    pub maps: Vec<BirationalMap>,
}

impl SampledWord {
    pub fn apply(&self, state: &[Rational]) -> Result<State, BirationalError> {
        let mut s = state.to_vec();
        for m in &self.maps {
            s = m.apply(&s)?;
        }
        Ok(s)
    }

    pub fn param_action(&self) -> ParamAction {
        let mut it = self.maps.iter();
        let first = it.next().expect("nonempty word").param_action.clone();
        it.fold(first, |acc, m| acc.then(&m.param_action))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComposeMode {
    Symbolic,
    Sampled,
}

#[derive(Debug, Clone)]
pub enum Composite {
    Symbolic(BirationalMap),
    Sampled(SampledWord),
}

/// Longest word composed symbolically; longer words are always sampled.
pub const MAX_SYMBOLIC_WORD: usize = 4;

/// Compose a word applied left to right.
pub fn compose_word(
    word: &[BirationalMap],
    mode: ComposeMode,
    cap: usize,
) -> Result<Composite, BirationalError> {
    if word.is_empty() {
        return Err(BirationalError::Malformed("empty word".into()));
    }
    if mode == ComposeMode::Sampled || word.len() > MAX_SYMBOLIC_WORD {
        return Ok(Composite::Sampled(SampledWord {
            maps: word.to_vec(),
        }));
    }
    let mut acc = word[0].clone();
    for m in &word[1..] {
        acc = acc.then(m, cap)?;
    }
    Ok(Composite::Symbolic(acc))
}

pub fn compose(
    m1: &BirationalMap,
    m2: &BirationalMap,
    mode: ComposeMode,
    cap: usize,
) -> Result<Composite, BirationalError> {
    compose_word(&[m1.clone(), m2.clone()], mode, cap)
}

/// Resolve a whitespace-separated word such as `"s0 s2 pi"`.
pub fn parse_word(ty: WeylType, word: &str) -> Result<Vec<BirationalMap>, BirationalError> {
    let gens = systems::generators(ty).map_err(|e| BirationalError::Malformed(e.to_string()))?;
    word.split_whitespace()
        .map(|tok| {
            gens.iter()
                .find(|g| g.name == tok)
                .cloned()
                .ok_or_else(|| BirationalError::UnknownGenerator(tok.to_string()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, parse_rf, rat, DEFAULT_TERM_CAP};

    fn d4_state(vals: &[(&str, Rational)]) -> State {
        let t = WeylType::D4.table();
        let mut s = vec![rat(0, 1); t.len()];
        for (n, v) in vals {
            s[t.index(n).unwrap()] = v.clone();
        }
        s
    }

    #[test]
    fn s1_at_a_point() {
        let s1 = systems::generator(WeylType::D4, "s1").unwrap();
        let st = d4_state(&[
            ("x", rat(1, 1)),
            ("y", rat(2, 1)),
            ("z", rat(3, 1)),
            ("alpha0", rat(1, 3)),
            ("alpha1", rat(1, 1)),
            ("alpha2", rat(-1, 5)),
            ("alpha3", rat(1, 7)),
            ("alpha4", rat(2, 9)),
        ]);
        let out = s1.apply(&st).unwrap();
        let t = WeylType::D4.table();
        let get = |s: &State, n: &str| s[t.index(n).unwrap()].clone();
        assert_eq!(
            (get(&out, "x"), get(&out, "y"), get(&out, "z")),
            (rat(1, 1), rat(2, 1), rat(2, 1))
        );
        assert_eq!(get(&out, "alpha1"), rat(-1, 1));
        assert_eq!(get(&out, "alpha2"), rat(4, 5));
        assert_eq!(get(&out, "alpha0"), rat(1, 3));
        let back = s1.apply(&out).unwrap();
        assert_eq!(back, st);
    }

    #[test]
    fn s2_indeterminate_at_z_zero() {
        let s2 = systems::generator(WeylType::D4, "s2").unwrap();
        let st = d4_state(&[("x", rat(1, 1)), ("alpha2", rat(1, 2))]);
        assert!(matches!(
            s2.apply(&st),
            Err(BirationalError::Indeterminate(_))
        ));
    }

    #[test]
    fn symbolic_involution() {
        for g in systems::generators(WeylType::D4).unwrap() {
            match compose(&g, &g, ComposeMode::Symbolic, DEFAULT_TERM_CAP).unwrap() {
                Composite::Symbolic(m) => assert!(m.is_identity(), "{}", g.name),
                Composite::Sampled(_) => panic!("expected symbolic"),
            }
        }
    }

    #[test]
    fn brackets() {
        let ps = systems::poisson_structure(WeylType::D4);
        assert!(ps.is_antisymmetric());
        let t = ps.table.clone();
        let p = |s: &str| parse_poly(&t, s).unwrap();
        assert_eq!(poisson_bracket(&p("z"), &p("x"), &ps), p("1"));
        assert_eq!(poisson_bracket(&p("x"), &p("y"), &ps), p("0"));
        assert_eq!(poisson_bracket(&p("z"), &p("x^2"), &ps), p("2 x"));
        let pa = systems::poisson_structure(WeylType::A3Pv);
        let q = |s: &str| parse_poly(&pa.table, s).unwrap();
        assert_eq!(poisson_bracket(&q("f0"), &q("f1"), &pa), q("1"));
        assert_eq!(poisson_bracket(&q("f2"), &q("f1"), &pa), q("1"));
        assert_eq!(poisson_bracket(&q("f0"), &q("f2"), &pa), q("0"));
    }

    #[test]
    fn series_examples() {
        let t = WeylType::D4.table();
        let x = parse_poly(&t, "x").unwrap();
        let z = parse_poly(&t, "z").unwrap();
        let r = poisson_series_transform(WeylType::D4, 2, &x, DEFAULT_SERIES_BOUND).unwrap();
        assert!(rf_equal(&r.total, &parse_rf(&t, "x + alpha2/z").unwrap()));
        assert_eq!(r.terms.len(), 2);
        assert!(r.matches_map);
        let r = poisson_series_transform(WeylType::D4, 1, &z, DEFAULT_SERIES_BOUND).unwrap();
        assert!(rf_equal(&r.total, &parse_rf(&t, "z - alpha1/x").unwrap()));
        let r = poisson_series_transform(WeylType::D4, 2, &z, DEFAULT_SERIES_BOUND).unwrap();
        assert_eq!(r.terms.len(), 1);
        assert!(r.matches_map);
    }

    #[test]
    fn volume_examples() {
        let c0 = &systems::charts(WeylType::D4).unwrap()[0];
        assert!(volume_check(&c0.map).unwrap());
        let b3 = &systems::charts(WeylType::B3).unwrap()[3];
        assert!(volume_check(&b3.map).unwrap());
        let doubled = BirationalMap::parse(WeylType::D4, "dbl", &["2 x", "y", "z"], &[]).unwrap();
        assert!(!volume_check(&doubled).unwrap());
    }

    #[test]
    fn chart_round_trips() {
        for ty in [WeylType::D4, WeylType::B3, WeylType::D3] {
            for c in systems::charts(ty).unwrap() {
                assert!(
                    c.round_trip(DEFAULT_TERM_CAP).unwrap(),
                    "{} {}",
                    ty,
                    c.map.name
                );
            }
        }
    }

    #[test]
    fn identity_pullback_is_field() {
        let sys = systems::build_vector_field(WeylType::D4, None).unwrap();
        let id = BirationalMap::identity(WeylType::D4);
        let f = sys.field();
        let p = pullback_field(&id, &f, DEFAULT_TERM_CAP).unwrap();
        for (a, b) in p.iter().zip(&f) {
            assert!(rf_equal(a, b));
        }
    }

    #[test]
    fn word_parsing() {
        assert_eq!(parse_word(WeylType::C2Piii, "s0 pi s1").unwrap().len(), 3);
        assert!(matches!(
            parse_word(WeylType::D4, "s0 s9"),
            Err(BirationalError::UnknownGenerator(_))
        ));
    }
}
