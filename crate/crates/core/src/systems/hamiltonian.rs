use std::fmt;
use std::sync::Arc;

use super::SystemError;
use crate::algebra::{appendix_table, parse_rf, reduced_table, RationalFunc, Symbol, SymbolTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HamiltonianKind {
    /// Sixth Painleve Hamiltonian in `(X, Y)` with parameters `A0..A4`.
    Hvi,
    /// Hamiltonian of the reduction along `x = y`.
    XEqY,
    Hv,
    Hiii,
}

impl HamiltonianKind {
    pub const ALL: [HamiltonianKind; 4] = [
        HamiltonianKind::Hvi,
        HamiltonianKind::XEqY,
        HamiltonianKind::Hv,
        HamiltonianKind::Hiii,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            HamiltonianKind::Hvi => "HVI",
            HamiltonianKind::XEqY => "H-x-eq-y",
            HamiltonianKind::Hv => "HV",
            HamiltonianKind::Hiii => "HIII",
        }
    }

    pub fn from_name(name: &str) -> Result<Self, SystemError> {
        HamiltonianKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(name))
            .ok_or_else(|| SystemError::UnknownName(format!("hamiltonian '{}'", name)))
    }
}

impl fmt::Display for HamiltonianKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Bracketed polynomial of the `x = y` Hamiltonian; the full Hamiltonian is
/// this times `-(eta - 1) b / (2 eta)`.
pub const XEQY_BRACKET: &str = "-(X - 1) (X - eta) X^2 Y^2 \
    - (2 alpha2 (X - 1) (X - eta) - alpha0 eta (X - 1) - alpha3 (X - eta)) X Y \
    - alpha2^2 X^2 + alpha2 (1 - (alpha0 + alpha1 + alpha2 + alpha4) + (1 - (alpha1 + alpha2 + alpha3 + alpha4)) eta) X";

pub const XEQY_PREFACTOR: &str = "-(eta - 1) b/(2 eta)";

const HVI: &str =
    "(Y^2 (X - t) (X - 1) X - ((A1 - 1) (X - 1) X + A3 (X - t) X + A4 (X - t) (X - 1)) Y \
    + A2 (A0 + A2) X)/(t (t - 1))";

const HV: &str =
    "-x^2 y^2/T + a x^2 y/T - x y^2 + (a + (alpha1 + alpha3)/T) x y - alpha0 y - a alpha1 x/T";

const HIII: &str = "(x^2 y^2 - eta x^2 y + 2 (alpha1 + alpha2) x y - T y - eta alpha2 x)/T";

#[derive(Debug, Clone)]
pub struct HamiltonianDef {
    pub kind: HamiltonianKind,
    pub table: Arc<SymbolTable>,
    pub expression: RationalFunc,
    /// Canonical coordinate and momentum.
    pub q: Symbol,
    pub p: Symbol,
    /// Independent variable (`t` or `T`).
    pub time: Symbol,
}

impl HamiltonianDef {
    /// `(dH/dp, -dH/dq)`.
    pub fn hamilton_field(&self) -> [RationalFunc; 2] {
        [
            self.expression.differentiate(self.p),
            self.expression.differentiate(self.q).negate(),
        ]
    }
}

pub fn hamiltonian(kind: HamiltonianKind) -> Result<HamiltonianDef, SystemError> {
    let (table, src, q, p, time) = match kind {
        HamiltonianKind::Hvi => (reduced_table(), HVI.to_string(), "X", "Y", "t"),
        HamiltonianKind::XEqY => (
            reduced_table(),
            format!("({}) ({})", XEQY_PREFACTOR, XEQY_BRACKET),
            "X",
            "Y",
            "t",
        ),
        HamiltonianKind::Hv => (appendix_table(), HV.to_string(), "x", "y", "T"),
        HamiltonianKind::Hiii => (appendix_table(), HIII.to_string(), "x", "y", "T"),
    };
    let expression = parse_rf(&table, &src)?;
    Ok(HamiltonianDef {
        kind,
        q: table.symbol(q)?,
        p: table.symbol(p)?,
        time: table.symbol(time)?,
        expression,
        table,
    })
}

/// The two-dimensional systems displayed next to `H_V` and `H_III`, as
/// `(dx/dT, dy/dT)`.
pub fn displayed_hamilton_system(kind: HamiltonianKind) -> Result<[RationalFunc; 2], SystemError> {
    let t = appendix_table();
    let (a, b) = match kind {
        HamiltonianKind::Hv => (
            "-2 x^2 y/T + a x^2/T - 2 x y + (a + (alpha1 + alpha3)/T) x - alpha0",
            "2 x y^2/T + y^2 - 2 a x y/T - (a + (alpha1 + alpha3)/T) y + a alpha1/T",
        ),
        HamiltonianKind::Hiii => (
            "2 x^2 y/T - eta x^2/T + 2 (alpha1 + alpha2) x/T - 1",
            "-2 x y^2/T + 2 eta x y/T - 2 (alpha1 + alpha2) y/T + eta alpha2/T",
        ),
        other => {
            return Err(SystemError::UnknownName(format!(
                "no displayed system for {}",
                other
            )))
        }
    };
    Ok([parse_rf(&t, a)?, parse_rf(&t, b)?])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, rf_equal};

    #[test]
    fn hvi_leading_term() {
        let h = hamiltonian(HamiltonianKind::Hvi).unwrap();
        let t = h.table.clone();
        let y2 = parse_poly(&t, "Y^2").unwrap();
        let (m, _) = y2.leading_term().unwrap();
        let coeff = h.expression.num().coefficients_in(t.index("Y").unwrap());
        let lead = RationalFunc::new(coeff[&2].clone(), h.expression.den().clone()).unwrap();
        assert!(rf_equal(
            &lead,
            &parse_rf(&t, "(X - t) (X - 1) X/(t (t - 1))").unwrap()
        ));
        assert_eq!(m.exponent(t.index("Y").unwrap()), 2);
    }

    #[test]
    fn hv_at_alpha0_zero_drops_one_term() {
        let h = hamiltonian(HamiltonianKind::Hv).unwrap();
        let t = h.table.clone();
        let a0 = t.index("alpha0").unwrap();
        let spec = h
            .expression
            .specialize(&[(a0, crate::algebra::rat(0, 1))])
            .unwrap();
        let diff = h.expression.checked_sub(&spec, usize::MAX).unwrap();
        assert!(rf_equal(&diff, &parse_rf(&t, "-alpha0 y").unwrap()));
    }

    #[test]
    fn hiii_matches_display() {
        let h = hamiltonian(HamiltonianKind::Hiii).unwrap();
        let [a, b] = h.hamilton_field();
        let [da, db] = displayed_hamilton_system(HamiltonianKind::Hiii).unwrap();
        assert!(rf_equal(&a, &da));
        assert!(rf_equal(&b, &db));
    }

    #[test]
    fn hv_matches_display() {
        let h = hamiltonian(HamiltonianKind::Hv).unwrap();
        let [a, b] = h.hamilton_field();
        let [da, db] = displayed_hamilton_system(HamiltonianKind::Hv).unwrap();
        assert!(rf_equal(&a, &da));
        assert!(rf_equal(&b, &db));
    }

    #[test]
    fn names_round_trip() {
        for k in HamiltonianKind::ALL {
            assert_eq!(HamiltonianKind::from_name(k.name()).unwrap(), k);
        }
        assert!(HamiltonianKind::from_name("HII").is_err());
    }
}
