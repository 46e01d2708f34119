use std::fmt;

use crate::algebra::{parse_poly, rat, MultiPoly, Rational, RationalFunc, Symbol};
use crate::birational::{pullback_chart, volume_check, ChartMap};
use crate::systems::{
    build_vector_field, charts, generators, invariant_divisors, DivisorRow, SystemDef, WeylType,
};

use super::sample::witness_names;
use super::{
    first_term, format_point, run_check, CheckConfig, Mode, Outcome, Sampler, VerificationReport,
    VerifyError,
};

/// The field with its scalar prefactor dropped.
fn polynomial_system(sys: &SystemDef) -> SystemDef {
    SystemDef {
        prefactor: RationalFunc::one(&sys.table),
        ..sys.clone()
    }
}

fn eliminate_chart(
    c: &ChartMap,
    subs: &[(usize, MultiPoly)],
    cap: usize,
) -> Result<ChartMap, VerifyError> {
    let mut out = c.clone();
    for img in out
        .map
        .var_images
        .iter_mut()
        .chain(out.inverse_images.iter_mut())
    {
        *img = img.substitute_poly(subs, cap)?;
    }
    Ok(out)
}

/// Polynomiality of the field in every chart, unit Jacobians of charts and
/// generators, and the degree bound.
pub fn check_holomorphy(ty: WeylType, cfg: &CheckConfig) -> VerificationReport {
    let cap = cfg.term_cap;
    run_check(
        format!("{}/holomorphy", ty.cli_name()),
        ty,
        Mode::Symbolic,
        || {
            if !ty.has_atlas() {
                return Ok(Outcome::skip(Mode::Symbolic, "no atlas available for this type"));
            }
            let (sys, elim) = build_vector_field(ty, None)?.eliminated(&[])?;
            holomorphy_on(&sys, cap).map(|o| o.note(format!("eliminated {}", elim)))
        },
    )
}

pub(crate) fn holomorphy_on(sys: &SystemDef, cap: usize) -> Result<Outcome, VerifyError> {
    let ty = sys.weyl;
    let degree = sys.degree();
    let degree_ok = if ty == WeylType::D4 {
        degree == 6
    } else {
        degree <= 6
    };
    if !degree_ok {
        return Ok(Outcome::fail(
            Mode::Symbolic,
            format!("total degree {} in the dependent variables", degree),
        ));
    }
    let poly = polynomial_system(sys);
    let (idx, value) = ty.elimination(&[]);
    let subs = [(idx, value)];
    let atlas = charts(ty)?;
    for c in &atlas {
        let name = &c.map.name;
        if !c.round_trip(cap)? {
            return Ok(Outcome::fail(
                Mode::Symbolic,
                format!("{} does not invert", name),
            ));
        }
        if !volume_check(&c.map)? {
            return Ok(Outcome::fail(
                Mode::Symbolic,
                format!("{} has Jacobian {}", name, c.map.jacobian()?),
            ));
        }
        let chart = eliminate_chart(c, &subs, cap)?;
        for (k, comp) in pullback_chart(&chart, &poly, cap)?.iter().enumerate() {
            if comp.as_polynomial()?.is_none() {
                let var = sys.table.name(sys.vars[k]);
                return Ok(Outcome::fail(
                    Mode::Symbolic,
                    format!(
                        "{}: component for {} keeps denominator {}",
                        name,
                        var,
                        comp.den()
                    ),
                ));
            }
        }
    }
    for g in generators(ty)? {
        if !volume_check(&g)? {
            return Ok(Outcome::fail(
                Mode::Symbolic,
                format!("{} has Jacobian {}", g.name, g.jacobian()?),
            ));
        }
    }
    Ok(Outcome::pass(Mode::Symbolic).note(format!(
        "{} charts polynomial; degree {}",
        atlas.len(),
        degree
    )))
}

/// How an invariant-divisor row was confirmed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivisorMode {
    Divisibility,
    ComponentWise,
}

impl fmt::Display for DivisorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DivisorMode::Divisibility => "divisibility",
            DivisorMode::ComponentWise => "component-wise",
        })
    }
}

/// `sum_v df/dv * P_v`.
fn lie_derivative(f: &MultiPoly, sys: &SystemDef) -> MultiPoly {
    sys.vars
        .iter()
        .zip(&sys.polynomial_part)
        .fold(MultiPoly::zero(&sys.table), |acc, (&v, p)| {
            &acc + &(&f.differentiate(Symbol(v)) * p)
        })
}

/// A variable in which `c` is linear with a constant coefficient.
fn solvable_var(c: &MultiPoly, vars: &[usize]) -> Option<(usize, Rational, MultiPoly)> {
    vars.iter().find_map(|&v| {
        let co = c.coefficients_in(v);
        if co.keys().max() != Some(&1) {
            return None;
        }
        let lead = co[&1].constant_value()?;
        let rest = co
            .get(&0)
            .cloned()
            .unwrap_or_else(|| MultiPoly::zero(c.table()));
        Some((v, lead, rest))
    })
}

fn check_row(
    ty: WeylType,
    row: &DivisorRow,
    cfg: &CheckConfig,
    check_id: &str,
) -> Result<Result<DivisorMode, String>, VerifyError> {
    let base = build_vector_field(ty, None)?;
    let table = base.table.clone();
    let mut zero: Vec<&str> = vec![row.param];
    zero.extend(row.also_zero.iter().copied());
    let zeros: Vec<(usize, Rational)> = zero
        .iter()
        .map(|n| Ok((table.index(n)?, rat(0, 1))))
        .collect::<Result<_, VerifyError>>()?;
    let (idx, value) = ty.elimination(&zero);
    let sys = base
        .specialize(&zeros)?
        .substitute_params(&[(idx, value.specialize(&zeros))])?;
    let lf = lie_derivative(&row.divisor, &sys);
    if lf.exact_divide(&row.divisor)?.is_some() {
        return Ok(Ok(DivisorMode::Divisibility));
    }
    let names = witness_names(ty);
    let mut sampler = Sampler::new(
        cfg.seed,
        &format!("{}/{}", check_id, row.param),
        table.clone(),
    );
    for c in &row.components {
        let (v, lead, rest) = solvable_var(c, &sys.vars)
            .ok_or_else(|| VerifyError::Other(format!("cannot parametrize the component {}", c)))?;
        for _ in 0..cfg.samples {
            let mut p = sampler.normalized_point(ty, &zero)?;
            let assigned: Vec<Option<Rational>> = p.iter().cloned().map(Some).collect();
            p[v] = -rest.evaluate(&assigned)? / lead.clone();
            let assigned: Vec<Option<Rational>> = p.iter().cloned().map(Some).collect();
            if !lf.evaluate(&assigned)?.is_zero() {
                return Ok(Err(format!(
                    "{}=0, {}: L(f) nonzero on {} = 0 at {}",
                    row.param,
                    row.divisor,
                    c,
                    format_point(&table, &p, &names)
                )));
            }
        }
    }
    Ok(Ok(DivisorMode::ComponentWise))
}

use num_traits::Zero;

/// Each row `(param, f)`: with `param = 0` the Lie derivative of `f` along
/// the field vanishes on `f = 0`.
pub fn check_invariant_divisors(ty: WeylType, cfg: &CheckConfig) -> VerificationReport {
    let id = format!("{}/invariant-divisors", ty.cli_name());
    run_check(id.clone(), ty, Mode::Symbolic, || {
        let mut notes = Vec::new();
        let mut mode = Mode::Symbolic;
        for row in invariant_divisors(ty)? {
            match check_row(ty, &row, cfg, &id)? {
                Ok(m) => {
                    if m == DivisorMode::ComponentWise {
                        mode = Mode::Sampled;
                    }
                    let extra: String =
                        row.also_zero.iter().map(|n| format!(", {}=0", n)).collect();
                    notes.push(format!(
                        "{}=0{}: {} by {}",
                        row.param, extra, row.divisor, m
                    ));
                }
                Err(w) => return Ok(Outcome::fail(mode, w)),
            }
        }
        match ty {
            WeylType::D4 => notes.push("alpha1=0 admits the particular solution x=0".into()),
            WeylType::B3 => notes.push("beta3=0 admits the particular solution xy=0".into()),
            _ => {}
        }
        let mut out = Outcome::pass(mode);
        out.notes = notes;
        Ok(out)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FirstIntegralKind {
    D4Eq1,
    Pv,
    Piii,
}

impl FirstIntegralKind {
    pub const ALL: [FirstIntegralKind; 3] = [
        FirstIntegralKind::D4Eq1,
        FirstIntegralKind::Pv,
        FirstIntegralKind::Piii,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FirstIntegralKind::D4Eq1 => "D4-eq1",
            FirstIntegralKind::Pv => "PV",
            FirstIntegralKind::Piii => "PIII",
        }
    }

    pub fn weyl(&self) -> WeylType {
        match self {
            FirstIntegralKind::D4Eq1 => WeylType::D4,
            FirstIntegralKind::Pv => WeylType::A3Pv,
            FirstIntegralKind::Piii => WeylType::C2Piii,
        }
    }

    pub fn for_type(ty: WeylType) -> Option<Self> {
        FirstIntegralKind::ALL.into_iter().find(|k| k.weyl() == ty)
    }
}

/// `(x-y)(x-y+1)(x-y+1-eta)(x-y-eta)`.
pub const EQ1_QUARTIC: &str = "(x - y) (x - y + 1) (x - y + 1 - eta) (x - y - eta)";

pub fn check_first_integral(kind: FirstIntegralKind, _cfg: &CheckConfig) -> VerificationReport {
    let ty = kind.weyl();
    run_check(
        format!("{}/first-integral", ty.cli_name()),
        ty,
        Mode::Symbolic,
        || {
            let (sys, elim) = build_vector_field(ty, None)?.eliminated(&[])?;
            Ok(first_integral_on(kind, &sys)?.note(format!("eliminated {}", elim)))
        },
    )
}

pub(crate) fn first_integral_on(
    kind: FirstIntegralKind,
    sys: &SystemDef,
) -> Result<Outcome, VerifyError> {
    let t = &sys.table;
    let p = &sys.polynomial_part;
    match kind {
        FirstIntegralKind::D4Eq1 => {
            // the stored middle component carries the sign of the field
            let d = &(&(&p[0] - &p[1]) - &parse_poly(t, EQ1_QUARTIC)?);
            if d.is_zero() {
                Ok(Outcome::pass(Mode::Symbolic).note("P1 + P2 equals the quartic in x - y"))
            } else {
                Ok(Outcome::fail(
                    Mode::Symbolic,
                    format!("P1 + P2 - quartic has term {}", first_term(d)),
                ))
            }
        }
        FirstIntegralKind::Pv => {
            let g = parse_poly(t, "f2 - f0")?;
            let d = &p[2] - &p[0];
            let k = match d.exact_divide(&g)? {
                Some(q) => q.constant_value(),
                None => None,
            };
            match k {
                Some(k) if !k.is_zero() => {
                    let phi = rat(2, 1) / k;
                    let ok = sys.prefactor.num().constant_value().is_none() || phi == rat(-2, 1);
                    let out = Outcome::pass(Mode::Symbolic).note(format!(
                        "d(f2-f0)/dt = f2-f0 holds exactly for phi = {}",
                        crate::algebra::fmt_rational(&phi)
                    ));
                    Ok(if ok {
                        out
                    } else {
                        Outcome::fail(Mode::Symbolic, "phi is fixed to another value")
                    })
                }
                _ => Ok(Outcome::fail(
                    Mode::Symbolic,
                    format!(
                        "d(f2-f0)/dt is not a constant multiple of f2-f0; term {}",
                        first_term(&d)
                    ),
                )),
            }
        }
        FirstIntegralKind::Piii => {
            let f = sys.field();
            let lhs = f[0].checked_sub(&f[2], usize::MAX)?;
            let rhs = RationalFunc::from_poly(parse_poly(t, "f0 - f2")?);
            let d = lhs.cross_difference(&rhs, usize::MAX)?;
            if d.is_zero() {
                Ok(Outcome::pass(Mode::Symbolic).note("d(f0-f2)/dt = f0-f2 with no free constant"))
            } else {
                Ok(Outcome::fail(
                    Mode::Symbolic,
                    format!("d(f0-f2)/dt - (f0-f2) has term {}", first_term(&d)),
                ))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::Status;

    #[test]
    fn eq1_holds() {
        let r = check_first_integral(FirstIntegralKind::D4Eq1, &CheckConfig::default());
        assert_eq!(r.status, Status::Pass, "{:?}", r);
    }

    #[test]
    fn pv_solves_phi() {
        let r = check_first_integral(FirstIntegralKind::Pv, &CheckConfig::default());
        assert_eq!(r.status, Status::Pass, "{:?}", r);
        assert!(r.notes.contains("phi = -2"), "{}", r.notes);
    }

    #[test]
    fn piii_first_integral() {
        let r = check_first_integral(FirstIntegralKind::Piii, &CheckConfig::default());
        assert_eq!(r.status, Status::Pass, "{:?}", r);
    }

    #[test]
    fn g2_has_no_atlas() {
        let r = check_holomorphy(WeylType::G2, &CheckConfig::default());
        assert_eq!(r.status, Status::Skip);
        assert!(r.notes.contains("no atlas"));
    }

    #[test]
    fn d4_divisors() {
        let r = check_invariant_divisors(WeylType::D4, &CheckConfig::default());
        assert_eq!(r.status, Status::Pass, "{:?}", r);
        assert!(
            r.notes.contains("alpha1=0: x by divisibility"),
            "{}",
            r.notes
        );
    }
}
