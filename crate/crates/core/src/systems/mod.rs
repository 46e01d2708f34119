//! Transcriptions of every system, Hamiltonian, chart atlas, generator list
//! and parameter normalization, keyed by symmetry type.

mod atlas;
pub mod d4;
mod hamiltonian;
mod weyl;

use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

pub use atlas::{
    charts, generator, generators, invariant_divisors, poisson_form, poisson_structure, DivisorRow,
    PoissonForm,
};
pub use hamiltonian::{
    displayed_hamilton_system, hamiltonian, HamiltonianDef, HamiltonianKind, XEQY_BRACKET,
    XEQY_PREFACTOR,
};
pub use weyl::{normalization_residual, numeric_residual, CoxeterOrder, Normalization, WeylType};

use crate::algebra::{
    parse_poly, parse_rf, AlgebraError, MultiPoly, Rational, RationalFunc, Symbol, SymbolTable,
    DEFAULT_TERM_CAP,
};
use crate::birational::BirationalError;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SystemError {
    #[error("unknown type '{0}'")]
    UnknownType(String),
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("expected {expected} parameters, got {got}")]
    ParamCount { expected: usize, got: usize },
    #[error("parameters violate {constraint} (residual {residual})")]
    Normalization {
        constraint: String,
        residual: String,
    },
    #[error("{0}")]
    Unavailable(String),
    #[error("dump format: {0}")]
    Dump(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("map: {0}")]
    Map(String),
}

impl From<BirationalError> for SystemError {
    fn from(e: BirationalError) -> Self {
        match e {
            BirationalError::Algebra(a) => SystemError::Algebra(a),
            other => SystemError::Map(other.to_string()),
        }
    }
}

/// Named choices for the time function `b(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BSpec {
    Generic,
    PviForm,
}

impl BSpec {
    pub fn from_name(name: &str) -> Result<Self, SystemError> {
        match name {
            "generic" => Ok(BSpec::Generic),
            "pvi-form" | "pvi" => Ok(BSpec::PviForm),
            _ => Err(SystemError::UnknownName(format!(
                "b specialization '{}'",
                name
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BSpec::Generic => "generic",
            BSpec::PviForm => "pvi-form",
        }
    }
}

pub const PVI_FORM: &str = "2 eta/(t (t - 1) (t + eta) (t + eta - 1))";

/// `b(t)` as a rational function over `table` (which must contain `b`, `t`
/// and `eta`).
pub fn b_specialization(
    table: &Arc<SymbolTable>,
    spec: BSpec,
) -> Result<RationalFunc, SystemError> {
    Ok(match spec {
        BSpec::Generic => RationalFunc::var(table, "b")?,
        BSpec::PviForm => parse_rf(table, PVI_FORM)?,
    })
}

/// Parameter values for a type: numeric or symbolic entries, one per
/// acted parameter.
#[derive(Debug, Clone)]
pub struct ParamVector {
    pub weyl: WeylType,
    pub entries: Vec<MultiPoly>,
}

impl ParamVector {
    /// Every entry left as its own symbol.
    pub fn symbolic(ty: WeylType) -> Self {
        let table = ty.table();
        let entries = ty
            .parameter_names()
            .iter()
            .map(|p| MultiPoly::var(&table, p).unwrap())
            .collect();
        ParamVector { weyl: ty, entries }
    }

    /// Numeric values; the normalization must hold exactly.
    pub fn numeric(ty: WeylType, values: &[Rational]) -> Result<Self, SystemError> {
        let r = numeric_residual(ty, values)?;
        if !r.is_zero() {
            return Err(SystemError::Normalization {
                constraint: ty.normalization().describe(ty.parameter_names()),
                residual: crate::algebra::fmt_rational(&r),
            });
        }
        let table = ty.table();
        let entries = values
            .iter()
            .map(|v| MultiPoly::constant(&table, v.clone()))
            .collect();
        Ok(ParamVector { weyl: ty, entries })
    }

    pub fn residual(&self) -> MultiPoly {
        normalization_residual(self.weyl, &self.entries).expect("entry count fixed at construction")
    }

    pub fn values(&self) -> Option<Vec<Rational>> {
        self.entries
            .iter()
            .map(|e| {
                if e.is_zero() {
                    Some(Rational::zero())
                } else {
                    e.constant_value()
                }
            })
            .collect()
    }

    pub fn substitution(&self) -> Vec<(usize, MultiPoly)> {
        let table = self.weyl.table();
        self.weyl
            .parameter_names()
            .iter()
            .map(|p| table.index(p).unwrap())
            .zip(self.entries.iter().cloned())
            .collect()
    }
}

/// A vector field `prefactor * polynomial_part` on the dependent variables.
#[derive(Debug, Clone)]
pub struct SystemDef {
    pub weyl: WeylType,
    pub table: Arc<SymbolTable>,
    pub vars: Vec<usize>,
    pub prefactor: RationalFunc,
    pub polynomial_part: Vec<MultiPoly>,
}

impl SystemDef {
    pub fn var_symbols(&self) -> Vec<Symbol> {
        self.vars.iter().map(|&v| Symbol(v)).collect()
    }

    /// Components of the field as rational functions.
    pub fn field(&self) -> Vec<RationalFunc> {
        self.polynomial_part
            .iter()
            .map(|p| {
                self.prefactor
                    .checked_mul(&RationalFunc::from_poly(p.clone()), usize::MAX)
                    .expect("uncapped product")
            })
            .collect()
    }

    /// Total degree of the polynomial part in the dependent variables.
    pub fn degree(&self) -> u32 {
        self.polynomial_part
            .iter()
            .filter_map(|p| p.degree_in_vars(&self.vars))
            .max()
            .unwrap_or(0)
    }

    pub fn substitute_params(&self, subs: &[(usize, MultiPoly)]) -> Result<SystemDef, SystemError> {
        let mut out = self.clone();
        out.prefactor = self.prefactor.substitute_poly(subs, DEFAULT_TERM_CAP)?;
        out.polynomial_part = self
            .polynomial_part
            .iter()
            .map(|p| p.checked_substitute_poly(subs, DEFAULT_TERM_CAP))
            .collect::<Result<_, _>>()?;
        Ok(out)
    }

    pub fn specialize(&self, values: &[(usize, Rational)]) -> Result<SystemDef, SystemError> {
        let mut out = self.clone();
        out.prefactor = self.prefactor.specialize(values)?;
        out.polynomial_part = self
            .polynomial_part
            .iter()
            .map(|p| p.specialize(values))
            .collect();
        Ok(out)
    }

    /// Impose the normalization by eliminating one parameter; returns the
    /// eliminated symbol name too.
    pub fn eliminated(&self, avoid: &[&str]) -> Result<(SystemDef, &'static str), SystemError> {
        let (idx, value) = self.weyl.elimination(avoid);
        let name = self.weyl.eliminated_parameter(avoid);
        Ok((self.substitute_params(&[(idx, value)])?, name))
    }

    /// Replace the opaque `b` by a named specialization.
    pub fn with_b(&self, spec: BSpec) -> Result<SystemDef, SystemError> {
        if spec == BSpec::Generic || self.table.try_index("b").is_none() {
            return Ok(self.clone());
        }
        let b = self.table.index("b")?;
        let value = b_specialization(&self.table, spec)?;
        let mut out = self.clone();
        out.prefactor = self.prefactor.substitute(&[(b, value)], DEFAULT_TERM_CAP)?;
        Ok(out)
    }

    /// Floating evaluation of the full field at a full-table point.
    pub fn eval_f64(&self, point: &[f64]) -> Vec<f64> {
        let pre = self.prefactor.eval_f64(point);
        self.polynomial_part
            .iter()
            .map(|p| pre * p.eval_f64(point))
            .collect()
    }
}

/// Parameter identification turning the D4(1) field into each restricted
/// type: pairs `(alpha_k, expression in beta)`.
pub fn restriction(ty: WeylType) -> Option<[(&'static str, &'static str); 5]> {
    match ty {
        WeylType::B3 => Some([
            ("alpha0", "beta0"),
            ("alpha1", "beta3"),
            ("alpha2", "beta2"),
            ("alpha3", "beta1"),
            ("alpha4", "beta3"),
        ]),
        WeylType::D3 => Some([
            ("alpha0", "beta0"),
            ("alpha1", "beta2"),
            ("alpha2", "beta1"),
            ("alpha3", "beta0"),
            ("alpha4", "beta2"),
        ]),
        WeylType::G2 => Some([
            ("alpha0", "beta0"),
            ("alpha1", "beta2"),
            ("alpha2", "beta1"),
            ("alpha3", "beta2"),
            ("alpha4", "beta2"),
        ]),
        WeylType::A2 => Some([
            ("alpha0", "beta1"),
            ("alpha1", "beta1"),
            ("alpha2", "beta0"),
            ("alpha3", "beta1"),
            ("alpha4", "beta1"),
        ]),
        _ => None,
    }
}

/// The D3(2) identification read literally from the displayed relations
/// (`alpha4 = alpha1 = beta0`, `alpha0 = alpha3 = beta2`); kept for the
/// check that shows it does not carry the stated generators.
pub const D3_LITERAL_RESTRICTION: [(&str, &str); 5] = [
    ("alpha0", "beta2"),
    ("alpha1", "beta0"),
    ("alpha2", "beta1"),
    ("alpha3", "beta2"),
    ("alpha4", "beta0"),
];

/// Apply an `alpha -> beta` identification to the D4(1) field.
pub fn restrict_d4(ty: WeylType, ident: &[(&str, &str)]) -> Result<SystemDef, SystemError> {
    let base = d4_system()?;
    let table = base.table.clone();
    let subs = ident
        .iter()
        .map(|(a, b)| Ok((table.index(a)?, parse_poly(&table, b)?)))
        .collect::<Result<Vec<_>, SystemError>>()?;
    let mut out = base.substitute_params(&subs)?;
    out.weyl = ty;
    Ok(out)
}

fn d4_system() -> Result<SystemDef, SystemError> {
    let table = crate::algebra::main_table();
    let vars = ["x", "y", "z"]
        .iter()
        .map(|v| table.index(v))
        .collect::<Result<_, _>>()?;
    Ok(SystemDef {
        weyl: WeylType::D4,
        prefactor: parse_rf(&table, "b/(2 eta)")?,
        polynomial_part: d4::polynomial_part().to_vec(),
        vars,
        table,
    })
}

const PV_PART: [&str; 3] = [
    "-(-2 f0 f1 f2 + a f0 f2 + (alpha0 + alpha1 + alpha3) f0 - alpha0 f2)",
    "-f0 f1^2 - f1^2 f2 + a f0 f1 + a f1 f2 - a alpha1 + (alpha1 + alpha3) f1",
    "-(-2 f0 f1 f2 + a f0 f2 + (alpha1 + alpha2 + alpha3) f2 - alpha2 f0)",
];

const PIII_PART: [&str; 3] = [
    "-2 f0 f1 f2 + (alpha0 + 2 alpha1) f0 - alpha0 f2",
    "(f0 + f2) f1^2 - 2 alpha1 f1 + eta",
    "-2 f0 f1 f2 + (2 alpha1 + alpha2) f2 - alpha2 f0",
];

fn parsed_system(ty: WeylType, prefactor: &str, part: &[&str]) -> Result<SystemDef, SystemError> {
    let table = ty.table();
    let vars = ty
        .variable_names()
        .iter()
        .map(|v| table.index(v))
        .collect::<Result<_, _>>()?;
    Ok(SystemDef {
        weyl: ty,
        prefactor: parse_rf(&table, prefactor)?,
        polynomial_part: part
            .iter()
            .map(|p| parse_poly(&table, p))
            .collect::<Result<_, _>>()?,
        vars,
        table,
    })
}

fn reduced_system() -> Result<SystemDef, SystemError> {
    let table = WeylType::D4Reduced.table();
    let k = parse_poly(&table, XEQY_BRACKET)?;
    let x = table.symbol("X")?;
    let y = table.symbol("Y")?;
    let part = vec![k.differentiate(y), -&k.differentiate(x)];
    let vars = vec![x.0, y.0];
    Ok(SystemDef {
        weyl: WeylType::D4Reduced,
        prefactor: parse_rf(&table, XEQY_PREFACTOR)?,
        polynomial_part: part,
        vars,
        table,
    })
}

/// The system of type `ty`, symbolic in its parameters unless `params` is
/// given. `b` stays generic.
pub fn build_vector_field(
    ty: WeylType,
    params: Option<&ParamVector>,
) -> Result<SystemDef, SystemError> {
    let sys = match ty {
        WeylType::D4 => d4_system()?,
        WeylType::B3 | WeylType::D3 | WeylType::G2 | WeylType::A2 => {
            restrict_d4(ty, &restriction(ty).unwrap())?
        }
        WeylType::A3Pv => parsed_system(ty, "phi/2", &PV_PART)?,
        WeylType::C2Piii => parsed_system(ty, "1", &PIII_PART)?,
        WeylType::D4Reduced => reduced_system()?,
    };
    match params {
        None => Ok(sys),
        Some(p) => {
            if p.weyl != ty {
                return Err(SystemError::UnknownName(format!(
                    "parameters of {} for {}",
                    p.weyl, ty
                )));
            }
            if let Some(values) = p.values() {
                let r = numeric_residual(ty, &values)?;
                if !r.is_zero() {
                    return Err(SystemError::Normalization {
                        constraint: ty.normalization().describe(ty.parameter_names()),
                        residual: crate::algebra::fmt_rational(&r),
                    });
                }
            }
            sys.substitute_params(&p.substitution())
        }
    }
}

/// Labels of the field components, e.g. `dx/dt`.
pub fn component_labels(ty: WeylType) -> Vec<String> {
    ty.variable_names()
        .iter()
        .map(|v| format!("d{}/dt", v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, rf_equal};

    #[test]
    fn d4_degree_is_six() {
        let s = build_vector_field(WeylType::D4, None).unwrap();
        assert_eq!(s.degree(), 6);
        for ty in WeylType::ALL {
            assert!(
                build_vector_field(ty, None).unwrap().degree() <= 6,
                "{}",
                ty
            );
        }
    }

    #[test]
    fn a2_is_d4_under_identification() {
        let a2 = build_vector_field(WeylType::A2, None).unwrap();
        let d4 = build_vector_field(WeylType::D4, None).unwrap();
        let t = d4.table.clone();
        let b0 = parse_poly(&t, "beta0").unwrap();
        let b1 = parse_poly(&t, "beta1").unwrap();
        let subs: Vec<(usize, MultiPoly)> = vec![
            (t.index("alpha0").unwrap(), b1.clone()),
            (t.index("alpha1").unwrap(), b1.clone()),
            (t.index("alpha2").unwrap(), b0),
            (t.index("alpha3").unwrap(), b1.clone()),
            (t.index("alpha4").unwrap(), b1),
        ];
        let via = d4.substitute_params(&subs).unwrap();
        assert_eq!(via.polynomial_part, a2.polynomial_part);
    }

    #[test]
    fn piii_middle_component() {
        let s = build_vector_field(WeylType::C2Piii, None).unwrap();
        let t = s.table.clone();
        assert!(rf_equal(
            &s.field()[1],
            &parse_rf(&t, "(f0 + f2) f1^2 - 2 alpha1 f1 + eta").unwrap()
        ));
    }

    #[test]
    fn numeric_params_checked() {
        let ok = ParamVector::numeric(
            WeylType::D4,
            &[rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1)],
        );
        assert!(ok.is_ok());
        let bad = ParamVector::numeric(
            WeylType::D4,
            &[rat(1, 1), rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1)],
        );
        match bad {
            Err(SystemError::Normalization { constraint, .. }) => {
                assert_eq!(
                    constraint,
                    "alpha0 + alpha1 + 2*alpha2 + alpha3 + alpha4 = 1"
                )
            }
            other => panic!("{:?}", other),
        }
        let piii = ParamVector::numeric(
            WeylType::C2Piii,
            &[rat(3, 1), rat(1, 2), rat(1, 4), rat(0, 1)],
        )
        .unwrap();
        assert!(piii.residual().is_zero());
    }

    #[test]
    fn pvi_form_factorizations_agree() {
        let t = crate::algebra::main_table();
        let a = b_specialization(&t, BSpec::PviForm).unwrap();
        let b = parse_rf(
            &t,
            "2 eta/(t (t - 1) (t^2 + (2 eta - 1) t + eta (eta - 1)))",
        )
        .unwrap();
        assert!(rf_equal(&a, &b));
        let g = b_specialization(&t, BSpec::Generic).unwrap();
        assert!(rf_equal(&g, &parse_rf(&t, "b").unwrap()));
        assert!(BSpec::from_name("other").is_err());
    }

    #[test]
    fn with_b_replaces_prefactor() {
        let s = build_vector_field(WeylType::D4, None)
            .unwrap()
            .with_b(BSpec::PviForm)
            .unwrap();
        let t = s.table.clone();
        assert!(rf_equal(
            &s.prefactor,
            &parse_rf(&t, "1/(t (t - 1) (t + eta) (t + eta - 1))").unwrap()
        ));
    }
}
