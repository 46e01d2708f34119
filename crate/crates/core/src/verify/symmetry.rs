use crate::algebra::{AlgebraError, MultiPoly, Rational, RationalFunc, Symbol};
use crate::birational::{
    parse_word, poisson_series_transform, pullback_field, BirationalError, BirationalMap,
    ParamAction, SampledWord, State, DEFAULT_SERIES_BOUND,
};
use crate::systems::{
    build_vector_field, generators, normalization_residual, CoxeterOrder, SystemDef, WeylType,
};

use super::sample::witness_names;
use super::{
    first_term, format_point, run_check, with_fallback, CheckConfig, Mode, Outcome, Sampler,
    VerificationReport, VerifyError,
};

/// Attempts allowed per requested sample before giving up on finding
/// regular points.
const ATTEMPTS_PER_SAMPLE: usize = 50;

pub fn check_symmetry(ty: WeylType, index: usize, cfg: &CheckConfig) -> VerificationReport {
    let names = ty.generator_names();
    let id = format!(
        "{}/symmetry/{}",
        ty.cli_name(),
        names.get(index).map(String::as_str).unwrap_or("?")
    );
    match generators(ty).map(|g| g.get(index).cloned()) {
        Ok(Some(map)) => check_symmetry_map(ty, &map, cfg, id),
        Ok(None) => run_check(id, ty, Mode::Symbolic, || {
            Err(VerifyError::Other(format!(
                "{} has no generator {}",
                ty, index
            )))
        }),
        Err(e) => run_check(id, ty, Mode::Symbolic, || Err(e.into())),
    }
}

/// Symmetry check for an arbitrary map, e.g. a deliberately broken one.
pub fn check_symmetry_map(
    ty: WeylType,
    map: &BirationalMap,
    cfg: &CheckConfig,
    check_id: String,
) -> VerificationReport {
    let seed = cfg.seed;
    let samples = cfg.samples;
    let cap = cfg.term_cap;
    run_check(check_id.clone(), ty, Mode::Symbolic, || {
        let sys = build_vector_field(ty, None)?;
        let mut out = with_fallback(
            cfg.mode,
            || {
                let w = symmetry_symbolic(&sys, map, cap)?;
                let elim = ty.eliminated_parameter(&[]);
                Ok(Outcome::from_witness(Mode::Symbolic, w).note(format!("eliminated {}", elim)))
            },
            || {
                let mut s = Sampler::new(seed, &check_id, sys.table.clone());
                Ok(Outcome::from_witness(
                    Mode::Sampled,
                    symmetry_sampled(&sys, map, &mut s, samples)?,
                ))
            },
        )?;
        if ty == WeylType::C2Piii && map.name == "s1" {
            out = out.note("s1 also maps eta to -eta");
        }
        if ty == WeylType::A3Pv && map.name == "pi" {
            out = out.note("pi transcribed as f0<->f2, alpha0<->alpha2; the eta in the displayed tuple is not used");
        }
        Ok(out)
    })
}

/// `None` when the pulled-back field equals the transformed field on the
/// normalization hyperplane; otherwise the offending component and term.
pub(crate) fn symmetry_symbolic(
    sys: &SystemDef,
    map: &BirationalMap,
    cap: usize,
) -> Result<Option<String>, VerifyError> {
    let field = sys.field();
    let lhs = pullback_field(map, &field, cap)?;
    let subs = map.substitution();
    let (idx, value) = sys.weyl.elimination(&[]);
    let elim = [(idx, value)];
    for (k, f) in field.iter().enumerate() {
        let rhs = f.substitute(&subs, cap)?;
        let d = lhs[k]
            .cross_difference(&rhs, cap)?
            .checked_substitute_poly(&elim, cap)?;
        if !d.is_zero() {
            let var = sys.table.name(sys.vars[k]);
            return Ok(Some(format!(
                "d{}/dt: cross-multiplied difference has term {}",
                var,
                first_term(&d)
            )));
        }
    }
    Ok(None)
}

/// Pointwise version: compares `J(p) F(p)` with `F(s(p))` at sampled
/// regular points on the normalization hyperplane.
pub(crate) fn symmetry_sampled(
    sys: &SystemDef,
    map: &BirationalMap,
    sampler: &mut Sampler,
    samples: usize,
) -> Result<Option<String>, VerifyError> {
    let field = sys.field();
    let jac: Vec<Vec<RationalFunc>> = map
        .var_images
        .iter()
        .map(|img| {
            map.vars
                .iter()
                .map(|&v| img.differentiate(Symbol(v)))
                .collect()
        })
        .collect();
    let names = witness_names(sys.weyl);
    let mut good = 0;
    for _ in 0..samples * ATTEMPTS_PER_SAMPLE {
        if good == samples {
            break;
        }
        let p = sampler.normalized_point(sys.weyl, &[])?;
        let Some(fp) = eval_all(&field, &p)? else {
            continue;
        };
        let image = match map.apply(&p) {
            Ok(s) => s,
            Err(BirationalError::Indeterminate(_)) => continue,
            Err(e) => return Err(e.into()),
        };
        let Some(fimg) = eval_all(&field, &image)? else {
            continue;
        };
        let Some(jp) = jac
            .iter()
            .map(|row| eval_all(row, &p))
            .collect::<Result<Option<Vec<_>>, _>>()?
        else {
            continue;
        };
        good += 1;
        for k in 0..field.len() {
            let lhs: Rational = jp[k].iter().zip(&fp).map(|(a, b)| a * b).sum();
            if lhs != fimg[k] {
                let var = sys.table.name(sys.vars[k]);
                return Ok(Some(format!(
                    "d{}/dt differs at {}",
                    var,
                    format_point(&sys.table, &p, &names)
                )));
            }
        }
    }
    if good < samples {
        return Err(VerifyError::Other(format!(
            "only {} regular sample points found",
            good
        )));
    }
    Ok(None)
}

/// Values of all `fs` at `p`, or `None` if a denominator vanishes.
pub(crate) fn eval_all(
    fs: &[RationalFunc],
    p: &[Rational],
) -> Result<Option<Vec<Rational>>, AlgebraError> {
    let point: Vec<Option<Rational>> = p.iter().cloned().map(Some).collect();
    let mut out = Vec::with_capacity(fs.len());
    for f in fs {
        match f.evaluate(&point) {
            Ok(v) => out.push(v),
            Err(AlgebraError::DivByZero) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    Ok(Some(out))
}

/// `s_i` composed with itself is the identity, symbolically.
pub fn check_involution(ty: WeylType, index: usize, cfg: &CheckConfig) -> VerificationReport {
    let names = ty.generator_names();
    let id = format!(
        "{}/involution/{}",
        ty.cli_name(),
        names.get(index).map(String::as_str).unwrap_or("?")
    );
    run_check(id, ty, Mode::Symbolic, || {
        let gens = generators(ty)?;
        let s = gens
            .get(index)
            .ok_or_else(|| VerifyError::Other(format!("{} has no generator {}", ty, index)))?;
        let sq = s.then(s, cfg.term_cap)?;
        if sq.is_identity() {
            return Ok(Outcome::pass(Mode::Symbolic));
        }
        if !sq.param_action.is_identity() {
            return Ok(Outcome::fail(
                Mode::Symbolic,
                format!("{0} {0} moves the parameters", s.name),
            ));
        }
        let k = sq
            .vars
            .iter()
            .zip(&sq.var_images)
            .position(|(&v, img)| {
                !crate::algebra::rf_equal(
                    img,
                    &RationalFunc::from_poly(MultiPoly::var_index(&sq.table, v)),
                )
            })
            .unwrap_or(0);
        Ok(Outcome::fail(
            Mode::Symbolic,
            format!(
                "{0} {0} changes {1}: {2}",
                s.name,
                sq.table.name(sq.vars[k]),
                sq.var_images[k]
            ),
        ))
    })
}

fn power(word: &[BirationalMap], k: usize) -> Vec<BirationalMap> {
    word.iter().cloned().cycle().take(word.len() * k).collect()
}

fn word_action(ty: WeylType, word: &[BirationalMap]) -> ParamAction {
    if word.is_empty() {
        let table = ty.table();
        let params: Vec<usize> = ty
            .parameter_names()
            .iter()
            .map(|n| table.index(n).unwrap())
            .collect();
        ParamAction::identity(&params)
    } else {
        SampledWord {
            maps: word.to_vec(),
        }
        .param_action()
    }
}

fn apply_word(word: &[BirationalMap], p: &[Rational]) -> Result<Option<State>, BirationalError> {
    let mut s = p.to_vec();
    for m in word {
        s = match m.apply(&s) {
            Ok(v) => v,
            Err(BirationalError::Indeterminate(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
    }
    Ok(Some(s))
}

/// Do `lhs` and `rhs` agree at sampled points? Returns the first
/// disagreeing point, or an error when too few regular points exist.
fn words_agree(
    ty: WeylType,
    lhs: &[BirationalMap],
    rhs: &[BirationalMap],
    sampler: &mut Sampler,
    samples: usize,
) -> Result<Option<State>, VerifyError> {
    let mut good = 0;
    for _ in 0..samples * ATTEMPTS_PER_SAMPLE {
        if good == samples {
            return Ok(None);
        }
        let p = sampler.normalized_point(ty, &[])?;
        let (Some(a), Some(b)) = (apply_word(lhs, &p)?, apply_word(rhs, &p)?) else {
            continue;
        };
        good += 1;
        if a != b {
            return Ok(Some(p));
        }
    }
    if good < samples {
        return Err(VerifyError::Other(format!(
            "only {} regular sample points found",
            good
        )));
    }
    Ok(None)
}

/// Coxeter relations `(s_i s_j)^m = 1` (with `m` minimal), the relations
/// involving `pi`, and non-periodicity of infinite-order pairs up to
/// `max_extra_order`.
pub fn check_coxeter(
    ty: WeylType,
    cfg: &CheckConfig,
    max_extra_order: usize,
) -> VerificationReport {
    let id = format!("{}/coxeter", ty.cli_name());
    let seed = cfg.seed;
    let samples = cfg.samples;
    run_check(id.clone(), ty, Mode::Sampled, || {
        let gens = generators(ty)?;
        let orders = ty.coxeter_orders();
        let mut sampler = Sampler::new(seed, &id, ty.table());
        let names = witness_names(ty);
        let table = ty.table();
        let mut checked = 0;
        for i in 0..orders.len() {
            for j in i + 1..orders.len() {
                let pair = [gens[i].clone(), gens[j].clone()];
                let label = format!("({} {})", gens[i].name, gens[j].name);
                match orders[i][j] {
                    CoxeterOrder::Finite(m) => {
                        let m = m as usize;
                        let word = power(&pair, m);
                        if !word_action(ty, &word).is_identity() {
                            return Ok(Outcome::fail(
                                Mode::Sampled,
                                format!("{}^{} moves the parameters", label, m),
                            ));
                        }
                        if let Some(p) = words_agree(ty, &word, &[], &mut sampler, samples)? {
                            return Ok(Outcome::fail(
                                Mode::Sampled,
                                format!(
                                    "{}^{} moves the point {}",
                                    label,
                                    m,
                                    format_point(&table, &p, &names)
                                ),
                            ));
                        }
                        for k in 1..m {
                            let w = power(&pair, k);
                            if word_action(ty, &w).is_identity()
                                && words_agree(ty, &w, &[], &mut sampler, samples)?.is_none()
                            {
                                return Ok(Outcome::fail(
                                    Mode::Sampled,
                                    format!("{}^{} is already the identity", label, k),
                                ));
                            }
                        }
                    }
                    CoxeterOrder::Infinite => {
                        for k in 1..=max_extra_order {
                            if word_action(ty, &power(&pair, k)).is_identity() {
                                return Ok(Outcome::fail(
                                    Mode::Sampled,
                                    format!("{}^{} fixes the parameters", label, k),
                                ));
                            }
                        }
                    }
                }
                checked += 1;
            }
        }
        let relations = ty.pi_relations();
        for (l, r) in &relations {
            let lw = parse_word(ty, l)?;
            let rw = parse_word(ty, r)?;
            let label = format!("{} = {}", l, if r.is_empty() { "1" } else { r });
            if word_action(ty, &lw) != word_action(ty, &rw) {
                return Ok(Outcome::fail(
                    Mode::Sampled,
                    format!("{} fails on the parameters", label),
                ));
            }
            if let Some(p) = words_agree(ty, &lw, &rw, &mut sampler, samples)? {
                return Ok(Outcome::fail(
                    Mode::Sampled,
                    format!("{} fails at {}", label, format_point(&table, &p, &names)),
                ));
            }
        }
        let mut out = Outcome::pass(Mode::Sampled).note(format!("{} generator pairs", checked));
        if !relations.is_empty() {
            out = out.note(format!("{} relations with pi", relations.len()));
        }
        Ok(out)
    })
}

/// Every generator preserves the normalization exactly.
pub fn check_param_actions(ty: WeylType, _cfg: &CheckConfig) -> VerificationReport {
    run_check(
        format!("{}/param-actions", ty.cli_name()),
        ty,
        Mode::Symbolic,
        || {
            let table = ty.table();
            let params: Vec<MultiPoly> = ty
                .parameter_names()
                .iter()
                .map(|n| MultiPoly::var(&table, n))
                .collect::<Result<_, _>>()?;
            let base = normalization_residual(ty, &params)?;
            for g in generators(ty)? {
                let moved = normalization_residual(ty, &g.param_action.apply_poly(&params))?;
                if moved != base {
                    return Ok(Outcome::fail(
                        Mode::Symbolic,
                        format!("{} changes the constraint residual to {}", g.name, moved),
                    ));
                }
            }
            Ok(Outcome::pass(Mode::Symbolic))
        },
    )
}

/// The exponential Poisson series of every reflection reproduces its action
/// on each dependent variable and terminates.
pub fn check_poisson_series(ty: WeylType, _cfg: &CheckConfig) -> VerificationReport {
    run_check(
        format!("{}/poisson-series", ty.cli_name()),
        ty,
        Mode::Symbolic,
        || {
            let table = ty.table();
            let mut notes = Vec::new();
            let mut longest = 0;
            for (index, name) in ty.generator_names().iter().enumerate() {
                for v in ty.variable_names() {
                    let g = MultiPoly::var(&table, v)?;
                    match poisson_series_transform(ty, index, &g, DEFAULT_SERIES_BOUND) {
                        Ok(r) if r.matches_map => longest = longest.max(r.truncated_at),
                        Ok(_) => {
                            return Ok(Outcome::fail(
                                Mode::Symbolic,
                                format!("series of {} on {} differs from the map", name, v),
                            ))
                        }
                        Err(BirationalError::NoSeries(_)) => {
                            notes.push(format!("{} has no series form", name));
                            break;
                        }
                        Err(BirationalError::NonTerminating { bound, .. }) => {
                            return Ok(Outcome::fail(
                                Mode::Symbolic,
                                format!(
                                    "series of {} on {} has a nonzero term at order {}",
                                    name, v, bound
                                ),
                            ))
                        }
                        Err(e) => return Err(e.into()),
                    }
                }
            }
            if ty == WeylType::C2Piii {
                notes.push("s1 uses the multiplier 2 alpha1 - eta/f1".to_string());
            }
            let mut out = Outcome::pass(Mode::Symbolic)
                .note(format!("series terminate by order {}", longest));
            out.notes.extend(notes);
            Ok(out)
        },
    )
}
