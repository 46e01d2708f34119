//! Floating-point integration of the systems and trajectory-level
//! cross-checks of the exact results.

mod checks;
mod csv;
mod dopri;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::algebra::{parse_rf, RationalFunc, SymbolTable};
use crate::systems::{build_vector_field, BSpec, SystemDef, SystemError, WeylType, PVI_FORM};

pub use checks::{
    energy_check, numeric_symmetry_check, numeric_symmetry_check_map, residual, scalar_xy_flow,
    tolerance_study, track_invariant, InvariantExpr, ResidualStats, ToleranceStudy, RESIDUAL_GRID,
};
pub use csv::{fmt_g17, write_csv};
pub use dopri::{dopri5, Event, EventKind, Rhs, Sample, Tolerances, Trajectory};

/// Largest tolerated normalization residual of floating parameters.
pub const NORMALIZATION_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum NumericsError {
    #[error("b is singular at t0 = {0}")]
    ImmediateSingularity(f64),
    #[error("parameters violate {constraint} (residual {residual:e})")]
    Normalization { constraint: String, residual: f64 },
    #[error("invalid integration spec: {0}")]
    BadSpec(String),
    #[error("{0} is indeterminate at this point")]
    Indeterminate(String),
    #[error("too few samples ({0}) for the residual stencil")]
    TooFewSamples(usize),
    #[error(transparent)]
    System(#[from] SystemError),
}

fn default_rel_tol() -> f64 {
    1e-10
}

fn default_abs_tol() -> f64 {
    1e-12
}

fn default_max_magnitude() -> f64 {
    1e8
}

fn de_weyl<'de, D: Deserializer<'de>>(d: D) -> Result<WeylType, D::Error> {
    let s = String::deserialize(d)?;
    WeylType::from_name(&s).map_err(serde::de::Error::custom)
}

fn ser_weyl<S: Serializer>(w: &WeylType, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(w.cli_name())
}

fn de_b<'de, D: Deserializer<'de>>(d: D) -> Result<BSpec, D::Error> {
    let s = String::deserialize(d)?;
    BSpec::from_name(&s).map_err(serde::de::Error::custom)
}

fn ser_b<S: Serializer>(b: &BSpec, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(b.name())
}

/// One integration run. `params` follow `WeylType::parameter_names`;
/// `constants` fix the remaining scalar symbols such as `eta`, `a`, `phi`.
/// With `b = generic` the time function is taken to be `b(t) = 1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntegrationSpec {
    #[serde(
        rename = "type",
        deserialize_with = "de_weyl",
        serialize_with = "ser_weyl"
    )]
    pub weyl: WeylType,
    pub params: Vec<f64>,
    #[serde(default)]
    pub constants: BTreeMap<String, f64>,
    #[serde(deserialize_with = "de_b", serialize_with = "ser_b")]
    pub b: BSpec,
    pub t0: f64,
    pub t1: f64,
    pub initial_state: Vec<f64>,
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    #[serde(default = "default_abs_tol")]
    pub abs_tol: f64,
    #[serde(default = "default_max_magnitude")]
    pub max_magnitude: f64,
}

/// The shipped healthy D4(1) run.
pub const HEALTHY_SPEC: &str = include_str!("../../data/healthy_spec.json");

impl IntegrationSpec {
    pub fn healthy() -> Self {
        serde_json::from_str(HEALTHY_SPEC).expect("shipped spec parses")
    }

    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            rel: self.rel_tol,
            abs: self.abs_tol,
            max_magnitude: self.max_magnitude,
        }
    }

    /// Same run with both tolerances multiplied by `factor`.
    pub fn scaled_tolerances(&self, factor: f64) -> Self {
        IntegrationSpec {
            rel_tol: self.rel_tol * factor,
            abs_tol: self.abs_tol * factor,
            ..self.clone()
        }
    }
}

/// The field of a spec with every symbol except the state and `t` fixed.
pub struct NumericModel {
    pub sys: SystemDef,
    pub table: Arc<SymbolTable>,
    template: Vec<f64>,
    t_index: Option<usize>,
    b_index: Option<usize>,
    b: Option<RationalFunc>,
}

impl NumericModel {
    pub fn new(spec: &IntegrationSpec) -> Result<Self, NumericsError> {
        let ty = spec.weyl;
        let names = ty.parameter_names();
        if spec.params.len() != names.len() {
            return Err(SystemError::ParamCount {
                expected: names.len(),
                got: spec.params.len(),
            }
            .into());
        }
        let norm = ty.normalization();
        let residual: f64 = norm
            .coeffs
            .iter()
            .zip(&spec.params)
            .map(|(c, p)| num_traits::ToPrimitive::to_f64(c).unwrap() * p)
            .sum::<f64>()
            - num_traits::ToPrimitive::to_f64(&norm.rhs).unwrap();
        if residual.abs() > NORMALIZATION_TOL {
            return Err(NumericsError::Normalization {
                constraint: norm.describe(names),
                residual,
            });
        }
        if spec.initial_state.len() != ty.variable_names().len() {
            return Err(NumericsError::BadSpec(format!(
                "{} initial values for {} variables",
                spec.initial_state.len(),
                ty.variable_names().len()
            )));
        }
        if !(spec.rel_tol > 0.0 && spec.abs_tol > 0.0) {
            return Err(NumericsError::BadSpec("tolerances must be positive".into()));
        }
        if spec.t1 < spec.t0 || !spec.t0.is_finite() || !spec.t1.is_finite() {
            return Err(NumericsError::BadSpec("need finite t0 <= t1".into()));
        }
        if spec.initial_state.iter().any(|v| !v.is_finite()) {
            return Err(NumericsError::BadSpec("initial state is not finite".into()));
        }
        let sys = build_vector_field(ty, None)?;
        let table = sys.table.clone();
        let mut template = vec![0.0; table.len()];
        for (n, v) in names.iter().zip(&spec.params) {
            template[table.index(n).map_err(SystemError::from)?] = *v;
        }
        if table.try_index("eta").is_some() && !names.contains(&"eta") {
            template[table.index("eta").unwrap()] = 2.0;
        }
        for (n, v) in &spec.constants {
            let i = table
                .try_index(n)
                .ok_or_else(|| NumericsError::BadSpec(format!("unknown constant '{}'", n)))?;
            if names.contains(&n.as_str()) || ty.variable_names().contains(&n.as_str()) {
                return Err(NumericsError::BadSpec(format!("'{}' is not a constant", n)));
            }
            template[i] = *v;
        }
        let b_index = table.try_index("b");
        let b = match (spec.b, b_index) {
            (BSpec::PviForm, Some(_)) => {
                Some(parse_rf(&table, PVI_FORM).map_err(SystemError::from)?)
            }
            _ => None,
        };
        let model = NumericModel {
            t_index: table.try_index("t"),
            sys,
            table,
            template,
            b_index,
            b,
        };
        if let Some(b) = &model.b {
            let mut p = model.template.clone();
            if let Some(ti) = model.t_index {
                p[ti] = spec.t0;
            }
            let den = b.den().eval_f64(&p);
            if den.abs() < 1e-12 {
                return Err(NumericsError::ImmediateSingularity(spec.t0));
            }
        }
        Ok(model)
    }

    /// Full-table point for state `y` at time `t`.
    pub fn point(&self, t: f64, y: &[f64]) -> Vec<f64> {
        let mut p = self.template.clone();
        if let Some(ti) = self.t_index {
            p[ti] = t;
        }
        for (&v, val) in self.sys.vars.iter().zip(y) {
            p[v] = *val;
        }
        if let Some(bi) = self.b_index {
            p[bi] = self.b_value(&p);
        }
        p
    }

    fn b_value(&self, p: &[f64]) -> f64 {
        self.b.as_ref().map_or(1.0, |b| b.eval_f64(p))
    }

    pub fn b_at(&self, t: f64) -> f64 {
        let mut p = self.template.clone();
        if let Some(ti) = self.t_index {
            p[ti] = t;
        }
        self.b_value(&p)
    }

    /// Times in `(t0, t1)` where the denominator of `b` vanishes.
    pub fn interior_singularities(&self, t0: f64, t1: f64) -> Vec<f64> {
        if self.b.is_none() {
            return Vec::new();
        }
        let eta = self
            .table
            .try_index("eta")
            .map_or(0.0, |i| self.template[i]);
        let mut roots = vec![0.0, 1.0, -eta, 1.0 - eta];
        roots.retain(|r| *r > t0 && *r < t1);
        roots.sort_by(f64::total_cmp);
        roots.dedup();
        roots
    }
}

impl Rhs for NumericModel {
    fn dim(&self) -> usize {
        self.sys.vars.len()
    }

    fn eval(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        let p = self.point(t, y);
        dy.copy_from_slice(&self.sys.eval_f64(&p));
    }
}

/// Integrate a spec. A pole of `b` at `t0` is an error; poles inside the
/// interval are recorded as warnings.
pub fn integrate(spec: &IntegrationSpec) -> Result<Trajectory, NumericsError> {
    let model = NumericModel::new(spec)?;
    let mut traj = dopri5(
        &model,
        spec.t0,
        spec.t1,
        &spec.initial_state,
        spec.tolerances(),
    );
    for r in model.interior_singularities(spec.t0, spec.t1) {
        traj.warnings.push(format!("b has a pole at t = {}", r));
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn healthy_spec_reaches_the_end() {
        let spec = IntegrationSpec::healthy();
        let tr = integrate(&spec).unwrap();
        assert!(tr.events.is_empty());
        assert_eq!(tr.t_end(), 2.5);
        let last = &tr.samples.last().unwrap().state;
        // endpoint of an independent scipy DOP853 run (rtol 1e-12) of the same spec
        let oracle = [0.30292404682059815, 0.4049577174709557, 0.4979990791930231];
        for (a, b) in last.iter().zip(oracle) {
            assert!((a - b).abs() < 1e-9, "{:?}", last);
        }
    }

    #[test]
    fn pole_of_b_at_start_is_an_error() {
        let spec = IntegrationSpec {
            t0: 1.0,
            t1: 1.5,
            ..IntegrationSpec::healthy()
        };
        assert_eq!(
            integrate(&spec).unwrap_err(),
            NumericsError::ImmediateSingularity(1.0)
        );
    }

    #[test]
    fn interior_pole_is_recorded() {
        let spec = IntegrationSpec {
            t0: 0.5,
            t1: 0.9,
            ..IntegrationSpec::healthy()
        };
        assert!(integrate(&spec).unwrap().warnings.is_empty());
        let spec = IntegrationSpec {
            t0: -0.5,
            t1: -0.2,
            ..IntegrationSpec::healthy()
        };
        let tr = integrate(&spec).unwrap();
        assert!(tr.warnings.is_empty());
        let spec = IntegrationSpec {
            t0: -1.5,
            t1: -0.5,
            ..IntegrationSpec::healthy()
        };
        let tr = integrate(&spec).unwrap();
        assert_eq!(tr.warnings.len(), 1, "{:?}", tr.warnings);
    }

    #[test]
    fn zero_length_interval() {
        let spec = IntegrationSpec {
            t1: 2.1,
            ..IntegrationSpec::healthy()
        };
        assert_eq!(integrate(&spec).unwrap().samples.len(), 1);
    }

    #[test]
    fn normalization_violation_quotes_constraint() {
        let spec = IntegrationSpec {
            params: vec![0.2, 0.2, 0.2, 0.2, 0.2],
            ..IntegrationSpec::healthy()
        };
        let e = integrate(&spec).unwrap_err();
        assert!(
            e.to_string()
                .contains("alpha0 + alpha1 + 2*alpha2 + alpha3 + alpha4 = 1"),
            "{}",
            e
        );
    }

    #[test]
    fn spec_round_trips_through_json() {
        let spec = IntegrationSpec::healthy();
        let text = serde_json::to_string(&spec).unwrap();
        let back: IntegrationSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back.params, spec.params);
        assert_eq!(back.weyl, WeylType::D4);
        assert_eq!(back.b, BSpec::PviForm);
    }
}
