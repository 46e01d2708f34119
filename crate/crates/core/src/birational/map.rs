use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::BirationalError;
use crate::algebra::{
    jacobian_det, parse_poly, parse_rf, rf_equal, AlgebraError, MultiPoly, Rational, RationalFunc,
    Symbol, SymbolTable,
};
use crate::systems::WeylType;

/// Integer affine map `p -> M p + c` on a parameter vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamAction {
    /// Table indices of the parameters, in vector order.
    pub params: Vec<usize>,
    pub matrix: Vec<Vec<i64>>,
    pub offset: Vec<i64>,
}

impl ParamAction {
    pub fn identity(params: &[usize]) -> Self {
        let n = params.len();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        ParamAction {
            params: params.to_vec(),
            matrix,
            offset: vec![0; n],
        }
    }

    /// Read an action from one affine expression per parameter, e.g.
    /// `["alpha0 + alpha2", ...]`.
    pub fn from_exprs(
        table: &Arc<SymbolTable>,
        params: &[usize],
        exprs: &[&str],
    ) -> Result<Self, BirationalError> {
        if exprs.len() != params.len() {
            return Err(BirationalError::Malformed(format!(
                "{} parameter images for {} parameters",
                exprs.len(),
                params.len()
            )));
        }
        let mut matrix = Vec::new();
        let mut offset = Vec::new();
        for e in exprs {
            let p = parse_poly(table, e)?;
            let mut row = vec![0i64; params.len()];
            let mut c0 = 0i64;
            for (m, c) in p.terms() {
                let c = as_i64(c).ok_or_else(|| {
                    BirationalError::Malformed(format!("non-integer coefficient in '{}'", e))
                })?;
                match m.total_degree() {
                    0 => c0 = c,
                    1 => {
                        let idx = (0..table.len()).find(|&k| m.exponent(k) == 1).unwrap();
                        let j = params.iter().position(|&q| q == idx).ok_or_else(|| {
                            BirationalError::Malformed(format!(
                                "'{}' is not an acted parameter",
                                table.name(idx)
                            ))
                        })?;
                        row[j] = c;
                    }
                    _ => return Err(BirationalError::Malformed(format!("'{}' is not affine", e))),
                }
            }
            matrix.push(row);
            offset.push(c0);
        }
        Ok(ParamAction {
            params: params.to_vec(),
            matrix,
            offset,
        })
    }

    pub fn is_identity(&self) -> bool {
        *self == ParamAction::identity(&self.params)
    }

    pub fn apply_numeric(&self, p: &[Rational]) -> Vec<Rational> {
        self.matrix
            .iter()
            .zip(&self.offset)
            .map(|(row, c)| {
                let mut acc = Rational::from_integer(BigInt::from(*c));
                for (m, v) in row.iter().zip(p) {
                    if *m != 0 {
                        acc += v * Rational::from_integer(BigInt::from(*m));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn apply_poly(&self, p: &[MultiPoly]) -> Vec<MultiPoly> {
        let table = p[0].table().clone();
        self.matrix
            .iter()
            .zip(&self.offset)
            .map(|(row, c)| {
                let mut acc = MultiPoly::from_int(&table, *c);
                for (m, v) in row.iter().zip(p) {
                    if *m != 0 {
                        acc = &acc + &v.scale(&Rational::from_integer(BigInt::from(*m)));
                    }
                }
                acc
            })
            .collect()
    }

    /// New value of every parameter as a polynomial in the old ones.
    pub fn images(&self, table: &Arc<SymbolTable>) -> Vec<MultiPoly> {
        let vars: Vec<MultiPoly> = self
            .params
            .iter()
            .map(|&i| MultiPoly::var_index(table, i))
            .collect();
        self.apply_poly(&vars)
    }

    /// Substitution list sending each parameter to its image.
    pub fn substitution(&self, table: &Arc<SymbolTable>) -> Vec<(usize, MultiPoly)> {
        self.params
            .iter()
            .copied()
            .zip(self.images(table))
            .collect()
    }

    /// `self` followed by `then`.
    pub fn then(&self, then: &ParamAction) -> ParamAction {
        let n = self.params.len();
        let mut matrix = vec![vec![0i64; n]; n];
        let mut offset = then.offset.clone();
        for i in 0..n {
            for k in 0..n {
                let a = then.matrix[i][k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    matrix[i][j] += a * self.matrix[k][j];
                }
                offset[i] += a * self.offset[k];
            }
        }
        ParamAction {
            params: self.params.clone(),
            matrix,
            offset,
        }
    }
}

fn as_i64(c: &Rational) -> Option<i64> {
    if c.is_integer() {
        c.to_integer().to_i64()
    } else {
        None
    }
}

/// A birational change of the dependent variables together with an affine
/// action on the parameters.
#[derive(Debug, Clone)]
pub struct BirationalMap {
    pub name: String,
    pub weyl: WeylType,
    pub table: Arc<SymbolTable>,
    pub vars: Vec<usize>,
    pub var_images: Vec<RationalFunc>,
    pub param_action: ParamAction,
}

/// A point: one exact value for every symbol of the table.
pub type State = Vec<Rational>;

impl BirationalMap {
    /// Build a map for `ty` from textual images of the variables and of the
    /// acted parameters.
    pub fn parse(
        ty: WeylType,
        name: &str,
        images: &[&str],
        params: &[&str],
    ) -> Result<Self, BirationalError> {
        let table = ty.table();
        let vars: Vec<usize> = ty
            .variable_names()
            .iter()
            .map(|v| table.index(v))
            .collect::<Result<_, _>>()?;
        if images.len() != vars.len() {
            return Err(BirationalError::Malformed(format!(
                "{} images for {} variables",
                images.len(),
                vars.len()
            )));
        }
        let var_images = images
            .iter()
            .map(|s| parse_rf(&table, s))
            .collect::<Result<Vec<_>, _>>()?;
        let pidx: Vec<usize> = ty
            .parameter_names()
            .iter()
            .map(|p| table.index(p))
            .collect::<Result<_, _>>()?;
        let param_action = if params.is_empty() {
            ParamAction::identity(&pidx)
        } else {
            ParamAction::from_exprs(&table, &pidx, params)?
        };
        Ok(BirationalMap {
            name: name.to_string(),
            weyl: ty,
            table,
            vars,
            var_images,
            param_action,
        })
    }

    pub fn identity(ty: WeylType) -> Self {
        let table = ty.table();
        let vars: Vec<usize> = ty
            .variable_names()
            .iter()
            .map(|v| table.index(v).unwrap())
            .collect();
        let pidx: Vec<usize> = ty
            .parameter_names()
            .iter()
            .map(|p| table.index(p).unwrap())
            .collect();
        let var_images = vars
            .iter()
            .map(|&v| RationalFunc::from_poly(MultiPoly::var_index(&table, v)))
            .collect();
        BirationalMap {
            name: "id".to_string(),
            weyl: ty,
            table,
            vars,
            var_images,
            param_action: ParamAction::identity(&pidx),
        }
    }

    pub fn var_symbols(&self) -> Vec<Symbol> {
        self.vars.iter().map(|&v| Symbol(v)).collect()
    }

    /// Exact image of a point; `Indeterminate` when a denominator vanishes.
    pub fn apply(&self, state: &[Rational]) -> Result<State, BirationalError> {
        let point: Vec<Option<Rational>> = state.iter().cloned().map(Some).collect();
        let mut out = state.to_vec();
        for (&v, img) in self.vars.iter().zip(&self.var_images) {
            out[v] = match img.evaluate(&point) {
                Ok(val) => val,
                Err(AlgebraError::DivByZero) => {
                    return Err(BirationalError::Indeterminate(self.name.clone()));
                }
                Err(e) => return Err(e.into()),
            };
        }
        let old: Vec<Rational> = self
            .param_action
            .params
            .iter()
            .map(|&i| state[i].clone())
            .collect();
        for (&i, val) in self
            .param_action
            .params
            .iter()
            .zip(self.param_action.apply_numeric(&old))
        {
            out[i] = val;
        }
        Ok(out)
    }

    /// Substitution list realising the map on expressions: variables go to
    /// their images, parameters to their transformed values.
    pub fn substitution(&self) -> Vec<(usize, RationalFunc)> {
        let mut subs: Vec<(usize, RationalFunc)> = self
            .vars
            .iter()
            .copied()
            .zip(self.var_images.iter().cloned())
            .collect();
        for (i, p) in self.param_action.substitution(&self.table) {
            subs.push((i, RationalFunc::from_poly(p)));
        }
        subs
    }

    /// `self` followed by `next`, as one map with unreduced components.
    pub fn then(&self, next: &BirationalMap, cap: usize) -> Result<BirationalMap, BirationalError> {
        if !Arc::ptr_eq(&self.table, &next.table) {
            return Err(AlgebraError::TableMismatch.into());
        }
        let subs = self.substitution();
        let var_images = next
            .var_images
            .iter()
            .map(|img| img.substitute(&subs, cap))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BirationalMap {
            name: format!("{} {}", self.name, next.name),
            weyl: self.weyl,
            table: self.table.clone(),
            vars: self.vars.clone(),
            var_images,
            param_action: self.param_action.then(&next.param_action),
        })
    }

    /// True when every image equals its variable and the action is trivial.
    pub fn is_identity(&self) -> bool {
        self.param_action.is_identity()
            && self.vars.iter().zip(&self.var_images).all(|(&v, img)| {
                rf_equal(
                    img,
                    &RationalFunc::from_poly(MultiPoly::var_index(&self.table, v)),
                )
            })
    }

    pub fn jacobian(&self) -> Result<RationalFunc, BirationalError> {
        Ok(jacobian_det(&self.var_images, &self.var_symbols())?)
    }
}

impl fmt::Display for BirationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imgs: Vec<String> = self.var_images.iter().map(|r| r.to_string()).collect();
        let params: Vec<String> = self
            .param_action
            .images(&self.table)
            .iter()
            .map(|p| p.to_string())
            .collect();
        write!(
            f,
            "{}: ({}; {})",
            self.name,
            imgs.join(", "),
            params.join(", ")
        )
    }
}

/// A holomorphy chart: forward coordinates and their closed-form inverse,
/// both written in the original variable symbols.
#[derive(Debug, Clone)]
pub struct ChartMap {
    pub map: BirationalMap,
    pub inverse_images: Vec<RationalFunc>,
}

impl ChartMap {
    pub fn parse(
        ty: WeylType,
        name: &str,
        images: &[&str],
        inverse: &[&str],
    ) -> Result<Self, BirationalError> {
        let map = BirationalMap::parse(ty, name, images, &[])?;
        let inverse_images = inverse
            .iter()
            .map(|s| parse_rf(&map.table, s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ChartMap {
            map,
            inverse_images,
        })
    }

    pub fn inverse_substitution(&self) -> Vec<(usize, RationalFunc)> {
        self.map
            .vars
            .iter()
            .copied()
            .zip(self.inverse_images.iter().cloned())
            .collect()
    }

    /// Both compositions of the chart with its inverse are the identity.
    pub fn round_trip(&self, cap: usize) -> Result<bool, BirationalError> {
        let fwd: Vec<(usize, RationalFunc)> = self
            .map
            .vars
            .iter()
            .copied()
            .zip(self.map.var_images.iter().cloned())
            .collect();
        let inv = self.inverse_substitution();
        for (k, &v) in self.map.vars.iter().enumerate() {
            let x = RationalFunc::from_poly(MultiPoly::var_index(&self.map.table, v));
            let there_back = self.inverse_images[k].substitute(&fwd, cap)?;
            let back_there = self.map.var_images[k].substitute(&inv, cap)?;
            if !rf_equal(&there_back, &x) || !rf_equal(&back_there, &x) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `jacobian_det(var_images) == 1`.
pub fn volume_check(m: &BirationalMap) -> Result<bool, BirationalError> {
    let j = m.jacobian()?;
    Ok(rf_equal(&j, &RationalFunc::one(&m.table)))
}
