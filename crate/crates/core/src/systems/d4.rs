//! The polynomial part of the D4(1) field, frozen as a term table, plus a
//! second grouped reading used to cross-check it.

use std::sync::{Arc, OnceLock};

use super::SystemError;
use crate::algebra::{
    fmt_rational, main_table, parse_poly, parse_rational, Monomial, MultiPoly, SymbolTable,
};

const FROZEN: &str = include_str!("../../data/d4_polynomial_part.tsv");

const P1: &str = "-2 x (y - 1) y z (x - eta) (2 x - 2 y + 1 - eta) \
    - 2 (2 a0 + 2 a1 + 4 a2 + a3 + a4) x^3 y - 2 (a0 + a1) x y^3 \
    + (5 a0 + 5 a1 + 6 a2 + a3 + a4) x^2 y^2 \
    - (5 a0 + 5 a1 + 6 a2 + 2 a3 - 3 (2 a0 + 2 a1 + 4 a2 + a3 + a4) eta) x^2 y \
    + (3 (a0 + a1) - (4 a0 + 6 a1 + 6 a2 + a3 + a4) eta) x y^2 + x^4 \
    + 2 (a0 + a1 + 2 a2 + a3 - eta) x^3 + 2 a1 eta y^3 \
    + ((a0 + a1 + 2 a2 + a3) (eta^2 - 3 eta + 1) + a4 eta^2) x^2 + a1 (eta - 3) eta y^2 \
    + (-(a0 + a1) + 2 (2 a0 + 3 a1 + 3 a2 + a3) eta - (2 a0 + 2 a1 + 4 a2 + a3 + a4) eta^2) x y \
    + (a0 + a1 + 2 a2 + a3) (eta - 1) eta x - a1 (eta - 1) eta y";

const P2: &str = "2 x (y - 1) y z (x - eta) (2 x - 2 y + 1 - eta) - 2 (a3 + a4) x^3 y \
    - 2 x y^3 (a0 + a1 + 4 a2 + 2 a3 + 2 a4) + x^2 y^2 (a0 + a1 + 6 a2 + 5 a3 + 5 a4) \
    + x^2 y (-(a0 + a1 + 6 a2 + 4 a3 + 6 a4) + 3 (a3 + a4) eta) \
    + x y^2 (3 (a0 + a1 + 4 a2 + 2 a3 + 2 a4) - (2 a0 + 6 a2 + 5 a3 + 5 a4) eta) + y^4 + 2 a4 x^3 \
    + 2 y^3 ((a0 + 2 a2 + a3 + a4) eta - 1) - a4 (3 eta - 1) x^2 \
    + y^2 (1 - 3 (a0 + 2 a2 + a3 + a4) eta + (a0 + 2 a2 + a3 + a4) eta^2) \
    + x y (-(a0 + a1 + 4 a2 + 2 a3 + 2 a4) + 2 (a0 + 3 a2 + 2 a3 + 3 a4) eta - (a3 + a4) eta^2) \
    + a4 (eta - 1) eta x - (a0 + 2 a2 + a3 + a4) (eta - 1) eta y";

const P3: &str = "(2 x - 2 y + 1 - eta) (2 x^2 y + 2 x y^2 - x^2 - y^2 eta - 2 (eta + 1) x y + eta (x + y)) z^2 \
    + z (-2 x^3 (a3 + a4) + 2 y^3 (a0 + a1) + 2 x^2 y (a0 + a1 + 6 a2 + 2 a3 + 2 a4) \
    - 2 x y^2 (2 a0 + 2 a1 + 6 a2 + a3 + a4) + x^2 (-(a0 + a1 + 6 a2 + 4 a3) + 3 (a3 + a4) eta) \
    + y^2 (-3 (a0 + a1) + (4 a0 + 6 a2 + a3 + a4) eta) \
    - 4 x y (-(a0 + a1 + 3 a2 + a3) + (a0 + 3 a2 + a3 + a4) eta) \
    + x (-(a0 + a1 + 4 a2 + 2 a3) + 2 (a0 + 3 a2 + 2 a3) eta - (a3 + a4) eta^2) \
    + y (a0 + a1 - 2 (2 a0 + 3 a2 + a3) eta + (2 a0 + 4 a2 + a3 + a4) eta^2) \
    - (a0 + 2 a2 + a3) (eta - 1) eta) \
    + a2 ((a0 + a1 + 2 a2 - a3 - a4) x^2 + (a0 + a1 - 2 a2 - a3 - a4) y^2 - 2 (a0 + a1 - a3 - a4) x y \
    + x (a0 + a1 - 2 a3 - (2 a0 + 2 a2 - a3 - a4) eta) \
    + y (-a0 - a1 + 2 a2 + 2 a3 + (2 a0 - a3 - a4) eta) \
    + (eta - 1) (a2 + a3 + (a0 + a2) eta))";

fn expand_names(src: &str) -> String {
    let mut s = src.to_string();
    for k in 0..5 {
        s = s.replace(&format!("a{}", k), &format!("alpha{}", k));
    }
    s
}

/// `(P1, P2, P3)` read from the grouped display, without the sign of the
/// middle equation applied.
pub fn grouped_reading() -> Result<[MultiPoly; 3], SystemError> {
    let t = main_table();
    Ok([
        parse_poly(&t, &expand_names(P1))?,
        parse_poly(&t, &expand_names(P2))?,
        parse_poly(&t, &expand_names(P3))?,
    ])
}

/// The signed triple `(P1, -P2, P3)` from the frozen table.
pub fn polynomial_part() -> &'static [MultiPoly] {
    static CELL: OnceLock<Vec<MultiPoly>> = OnceLock::new();
    CELL.get_or_init(|| parse_dump(&main_table(), FROZEN).expect("frozen D4 table is well formed"))
}

/// Render polynomials in the dump format: a header, the symbol order, then
/// one `exponents TAB coefficient` line per term, leading term first.
pub fn write_dump(title: &str, labels: &[String], polys: &[MultiPoly]) -> String {
    let mut out = String::new();
    out.push_str(&format!("# pwl dump {}\n", title));
    if let Some(p) = polys.first() {
        out.push_str(&format!(
            "# symbols {}\n",
            p.table().names().collect::<Vec<_>>().join(" ")
        ));
    }
    for (k, p) in polys.iter().enumerate() {
        let label = labels.get(k).map(String::as_str).unwrap_or("?");
        out.push_str(&format!("# component {} {} terms {}\n", k, label, p.len()));
        for (m, c) in p.terms().rev() {
            let exps: Vec<String> = m.exponents().iter().map(|e| e.to_string()).collect();
            out.push_str(&format!("{}\t{}\n", exps.join(" "), fmt_rational(c)));
        }
    }
    out
}

/// Read the dump format back into polynomials over `table`. Symbols are
/// matched by name, so a dump may use a different symbol order.
pub fn parse_dump(table: &Arc<SymbolTable>, text: &str) -> Result<Vec<MultiPoly>, SystemError> {
    let bad = |line: usize, msg: &str| SystemError::Dump(format!("line {}: {}", line + 1, msg));
    let mut columns: Option<Vec<usize>> = None;
    let mut polys: Vec<MultiPoly> = Vec::new();
    let mut expected: Vec<usize> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("# symbols ") {
            let cols = rest
                .split_whitespace()
                .map(|s| {
                    table
                        .index(s)
                        .map_err(|_| bad(n, &format!("unknown symbol {}", s)))
                })
                .collect::<Result<Vec<_>, _>>()?;
            columns = Some(cols);
        } else if let Some(rest) = line.strip_prefix("# component ") {
            let count = rest
                .rsplit_once("terms ")
                .and_then(|(_, c)| c.trim().parse::<usize>().ok())
                .ok_or_else(|| bad(n, "component header without term count"))?;
            polys.push(MultiPoly::zero(table));
            expected.push(count);
        } else if line.starts_with('#') {
            continue;
        } else {
            let cols = columns
                .as_ref()
                .ok_or_else(|| bad(n, "terms before symbol line"))?;
            let current = polys
                .last_mut()
                .ok_or_else(|| bad(n, "terms before component header"))?;
            let (exps, coeff) = line.split_once('\t').ok_or_else(|| bad(n, "missing tab"))?;
            let raw: Vec<u16> = exps
                .split_whitespace()
                .map(|e| e.parse::<u16>().map_err(|_| bad(n, "bad exponent")))
                .collect::<Result<_, _>>()?;
            if raw.len() != cols.len() {
                return Err(bad(n, "exponent count does not match symbol line"));
            }
            let mut full = vec![0u16; table.len()];
            for (e, &c) in raw.iter().zip(cols) {
                full[c] = *e;
            }
            let c = parse_rational(coeff).map_err(|_| bad(n, "bad coefficient"))?;
            let term = MultiPoly::monomial(table, Monomial::from_exponents(&full), c);
            *current = &*current + &term;
        }
    }
    for (k, (p, want)) in polys.iter().zip(&expected).enumerate() {
        if p.len() != *want {
            return Err(SystemError::Dump(format!(
                "component {} has {} terms, header says {}",
                k,
                p.len(),
                want
            )));
        }
    }
    Ok(polys)
}
