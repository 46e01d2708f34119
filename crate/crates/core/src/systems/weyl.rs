use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::SystemError;
use crate::algebra::{
    appendix_table, main_table, rat, reduced_table, MultiPoly, Rational, SymbolTable,
};

/// The eight symmetry types handled by the toolkit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WeylType {
    D4,
    B3,
    D3,
    G2,
    A2,
    A3Pv,
    C2Piii,
    D4Reduced,
}

/// Order of `s_i s_j` in the Coxeter presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoxeterOrder {
    Finite(u32),
    Infinite,
}

impl fmt::Display for CoxeterOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoxeterOrder::Finite(m) => write!(f, "{}", m),
            CoxeterOrder::Infinite => write!(f, "inf"),
        }
    }
}

/// Affine constraint `sum coeffs[i] * params[i] = rhs`.
#[derive(Debug, Clone)]
pub struct Normalization {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl Normalization {
    fn new(coeffs: &[i64], rhs: Rational) -> Self {
        Normalization {
            coeffs: coeffs
                .iter()
                .map(|&c| Rational::from_integer(BigInt::from(c)))
                .collect(),
            rhs,
        }
    }

    /// Human-readable form such as `alpha0 + alpha1 + 2*alpha2 + alpha3 + alpha4 = 1`.
    pub fn describe(&self, names: &[&str]) -> String {
        let mut parts = Vec::new();
        for (c, n) in self.coeffs.iter().zip(names) {
            if c.is_zero() {
                continue;
            }
            if *c == rat(1, 1) {
                parts.push(n.to_string());
            } else {
                parts.push(format!("{}*{}", crate::algebra::fmt_rational(c), n));
            }
        }
        format!(
            "{} = {}",
            parts.join(" + "),
            crate::algebra::fmt_rational(&self.rhs)
        )
    }
}

const D4_PARAMS: [&str; 5] = ["alpha0", "alpha1", "alpha2", "alpha3", "alpha4"];

impl WeylType {
    pub const ALL: [WeylType; 8] = [
        WeylType::D4,
        WeylType::B3,
        WeylType::D3,
        WeylType::G2,
        WeylType::A2,
        WeylType::A3Pv,
        WeylType::C2Piii,
        WeylType::D4Reduced,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            WeylType::D4 => "D4(1)",
            WeylType::B3 => "B3(1)",
            WeylType::D3 => "D3(2)",
            WeylType::G2 => "G2(1)",
            WeylType::A2 => "A2(2)",
            WeylType::A3Pv => "A3(1)-PV",
            WeylType::C2Piii => "C2(1)-PIII",
            WeylType::D4Reduced => "D4(1)-reduced-2D",
        }
    }

    pub fn cli_name(&self) -> &'static str {
        match self {
            WeylType::D4 => "d4",
            WeylType::B3 => "b3",
            WeylType::D3 => "d3",
            WeylType::G2 => "g2",
            WeylType::A2 => "a2",
            WeylType::A3Pv => "a3-pv",
            WeylType::C2Piii => "c2-piii",
            WeylType::D4Reduced => "d4-reduced",
        }
    }

    pub fn from_name(name: &str) -> Result<WeylType, SystemError> {
        let n = name.trim().to_ascii_lowercase();
        let t = match n.as_str() {
            "d4" | "d4(1)" => WeylType::D4,
            "b3" | "b3(1)" => WeylType::B3,
            "d3" | "d3(2)" => WeylType::D3,
            "g2" | "g2(1)" => WeylType::G2,
            "a2" | "a2(2)" => WeylType::A2,
            "a3-pv" | "a3" | "pv" | "a3(1)-pv" => WeylType::A3Pv,
            "c2-piii" | "c2" | "piii" | "c2(1)-piii" => WeylType::C2Piii,
            "d4-reduced" | "d4-reduced-2d" | "d4(1)-reduced-2d" => WeylType::D4Reduced,
            _ => return Err(SystemError::UnknownType(name.to_string())),
        };
        Ok(t)
    }

    pub fn table(&self) -> Arc<SymbolTable> {
        match self {
            WeylType::A3Pv | WeylType::C2Piii => appendix_table(),
            WeylType::D4Reduced => reduced_table(),
            _ => main_table(),
        }
    }

    pub fn variable_names(&self) -> &'static [&'static str] {
        match self {
            WeylType::A3Pv | WeylType::C2Piii => &["f0", "f1", "f2"],
            WeylType::D4Reduced => &["X", "Y"],
            _ => &["x", "y", "z"],
        }
    }

    /// Parameters acted on by the generators, in the order used by parameter
    /// vectors. For C2(1)-PIII the list starts with `eta`, which `s1` negates.
    pub fn parameter_names(&self) -> &'static [&'static str] {
        match self {
            WeylType::D4 | WeylType::D4Reduced => &D4_PARAMS,
            WeylType::B3 => &["beta0", "beta1", "beta2", "beta3"],
            WeylType::D3 | WeylType::G2 => &["beta0", "beta1", "beta2"],
            WeylType::A2 => &["beta0", "beta1"],
            WeylType::A3Pv => &["alpha0", "alpha1", "alpha2", "alpha3"],
            WeylType::C2Piii => &["eta", "alpha0", "alpha1", "alpha2"],
        }
    }

    pub fn normalization(&self) -> Normalization {
        match self {
            WeylType::D4 | WeylType::D4Reduced => Normalization::new(&[1, 1, 2, 1, 1], rat(1, 1)),
            WeylType::B3 => Normalization::new(&[1, 1, 2, 2], rat(1, 1)),
            WeylType::D3 => Normalization::new(&[1, 1, 1], rat(1, 2)),
            WeylType::G2 => Normalization::new(&[1, 2, 3], rat(1, 1)),
            WeylType::A2 => Normalization::new(&[1, 2], rat(1, 2)),
            WeylType::A3Pv => Normalization::new(&[1, 1, 1, 1], rat(1, 1)),
            WeylType::C2Piii => Normalization::new(&[0, 1, 2, 1], rat(1, 1)),
        }
    }

    /// Reflection generators (without the diagram automorphism).
    pub fn reflection_names(&self) -> Vec<String> {
        let n = match self {
            WeylType::D4 | WeylType::D4Reduced => 5,
            WeylType::B3 | WeylType::A3Pv => 4,
            WeylType::D3 | WeylType::G2 | WeylType::C2Piii => 3,
            WeylType::A2 => 2,
        };
        (0..n).map(|i| format!("s{}", i)).collect()
    }

    pub fn has_pi(&self) -> bool {
        matches!(self, WeylType::A3Pv | WeylType::C2Piii)
    }

    /// All generator names, `pi` last where present.
    pub fn generator_names(&self) -> Vec<String> {
        let mut v = self.reflection_names();
        if self.has_pi() {
            v.push("pi".to_string());
        }
        v
    }

    /// Coxeter matrix over the reflections, read off the affine Dynkin
    /// diagram: no bond 2, single 3, double 4, triple 6, quadruple infinite.
    pub fn coxeter_orders(&self) -> Vec<Vec<CoxeterOrder>> {
        use CoxeterOrder::{Finite as F, Infinite as I};
        let n = self.reflection_names().len();
        let mut m = vec![vec![F(2); n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = F(1);
        }
        let mut bond = |i: usize, j: usize, o: CoxeterOrder| {
            m[i][j] = o;
            m[j][i] = o;
        };
        match self {
            WeylType::D4 | WeylType::D4Reduced => {
                for j in [0, 1, 3, 4] {
                    bond(2, j, F(3));
                }
            }
            WeylType::B3 => {
                bond(0, 2, F(3));
                bond(1, 2, F(3));
                bond(2, 3, F(4));
            }
            WeylType::D3 | WeylType::C2Piii => {
                bond(0, 1, F(4));
                bond(1, 2, F(4));
            }
            WeylType::G2 => {
                bond(0, 1, F(3));
                bond(1, 2, F(6));
            }
            WeylType::A2 => bond(0, 1, I),
            WeylType::A3Pv => {
                bond(0, 1, F(3));
                bond(1, 2, F(3));
                bond(2, 3, F(3));
                bond(3, 0, F(3));
            }
        }
        m
    }

    /// Relations involving `pi`, as pairs of words that must act identically.
    pub fn pi_relations(&self) -> Vec<(String, String)> {
        let pairs: &[(&str, &str)] = match self {
            WeylType::A3Pv => &[
                ("pi pi", ""),
                ("pi s0", "s2 pi"),
                ("pi s1", "s1 pi"),
                ("pi s2", "s0 pi"),
                ("pi s3", "s3 pi"),
            ],
            WeylType::C2Piii => &[
                ("pi pi", ""),
                ("pi s0", "s2 pi"),
                ("pi s1", "s1 pi"),
                ("pi s2", "s0 pi"),
            ],
            _ => &[],
        };
        pairs
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect()
    }

    /// Parameter removed when imposing the normalization, skipping `avoid`.
    pub fn eliminated_parameter(&self, avoid: &[&str]) -> &'static str {
        let norm = self.normalization();
        self.parameter_names()
            .iter()
            .zip(norm.coeffs.iter())
            .find(|(n, c)| !c.is_zero() && !avoid.contains(n))
            .map(|(n, _)| *n)
            .expect("normalization has a free parameter")
    }

    /// `(index, value)` expressing the eliminated parameter through the rest.
    pub fn elimination(&self, avoid: &[&str]) -> (usize, MultiPoly) {
        let table = self.table();
        let name = self.eliminated_parameter(avoid);
        let norm = self.normalization();
        let names = self.parameter_names();
        let k = names.iter().position(|n| *n == name).unwrap();
        let mut rest = MultiPoly::constant(&table, norm.rhs.clone());
        for (i, n) in names.iter().enumerate() {
            if i == k || norm.coeffs[i].is_zero() {
                continue;
            }
            let v = MultiPoly::var(&table, n).expect("registered parameter");
            rest = &rest - &v.scale(&norm.coeffs[i]);
        }
        let value = rest.scale(&(Rational::from_integer(BigInt::from(1)) / norm.coeffs[k].clone()));
        (table.index(name).unwrap(), value)
    }

    pub fn has_atlas(&self) -> bool {
        matches!(self, WeylType::D4 | WeylType::B3 | WeylType::D3)
    }
}

impl fmt::Display for WeylType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl Serialize for WeylType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

/// `sum c_i p_i - rhs` for a parameter vector given as polynomials.
pub fn normalization_residual(
    ty: WeylType,
    params: &[MultiPoly],
) -> Result<MultiPoly, SystemError> {
    let names = ty.parameter_names();
    if params.len() != names.len() {
        return Err(SystemError::ParamCount {
            expected: names.len(),
            got: params.len(),
        });
    }
    let norm = ty.normalization();
    let table = params[0].table().clone();
    let mut acc = MultiPoly::constant(&table, -norm.rhs.clone());
    for (p, c) in params.iter().zip(norm.coeffs.iter()) {
        acc = &acc + &p.scale(c);
    }
    Ok(acc)
}

/// Same as [`normalization_residual`] for a numeric vector.
pub fn numeric_residual(ty: WeylType, params: &[Rational]) -> Result<Rational, SystemError> {
    let names = ty.parameter_names();
    if params.len() != names.len() {
        return Err(SystemError::ParamCount {
            expected: names.len(),
            got: params.len(),
        });
    }
    let norm = ty.normalization();
    let mut acc = -norm.rhs.clone();
    for (p, c) in params.iter().zip(norm.coeffs.iter()) {
        acc += p * c;
    }
    Ok(acc)
}
