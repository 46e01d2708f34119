use rayon::prelude::*;

use crate::systems::WeylType;

use super::{
    check_coxeter, check_first_integral, check_holomorphy, check_invariant_divisors,
    check_involution, check_param_actions, check_poisson_series, check_reduction, check_symmetry,
    run_check, CheckConfig, FirstIntegralKind, Mode, ReductionKind, VerificationReport,
    VerifyError,
};

/// Largest power tried when confirming an infinite Coxeter order.
pub const MAX_EXTRA_ORDER: usize = 12;

const CHECKS: [&str; 9] = [
    "symmetry",
    "involution",
    "coxeter",
    "param-actions",
    "holomorphy",
    "invariant-divisors",
    "first-integral",
    "poisson-series",
    "reduction",
];

/// Registered check names; single reductions are addressable by kind too.
pub fn check_names() -> Vec<&'static str> {
    let mut v = CHECKS.to_vec();
    v.extend(ReductionKind::ALL.iter().map(|k| k.name()));
    v
}

type Job = Box<dyn Fn() -> VerificationReport + Send + Sync>;

fn jobs_for(ty: WeylType, check: &str, cfg: &CheckConfig) -> Option<Vec<Job>> {
    let n = ty.generator_names().len();
    let c = cfg.clone();
    let jobs: Vec<Job> = match check {
        "symmetry" => (0..n)
            .map(|i| {
                let c = c.clone();
                Box::new(move || check_symmetry(ty, i, &c)) as Job
            })
            .collect(),
        "involution" => (0..n)
            .map(|i| {
                let c = c.clone();
                Box::new(move || check_involution(ty, i, &c)) as Job
            })
            .collect(),
        "coxeter" => vec![Box::new(move || check_coxeter(ty, &c, MAX_EXTRA_ORDER))],
        "param-actions" => vec![Box::new(move || check_param_actions(ty, &c))],
        "holomorphy" => vec![Box::new(move || check_holomorphy(ty, &c))],
        "invariant-divisors" => vec![Box::new(move || check_invariant_divisors(ty, &c))],
        "first-integral" => match FirstIntegralKind::for_type(ty) {
            Some(k) => vec![Box::new(move || check_first_integral(k, &c))],
            None => Vec::new(),
        },
        "poisson-series" => vec![Box::new(move || check_poisson_series(ty, &c))],
        "reduction" => ReductionKind::ALL
            .into_iter()
            .filter(|k| k.weyl() == ty)
            .map(|k| {
                let c = c.clone();
                Box::new(move || check_reduction(k, &c)) as Job
            })
            .collect(),
        other => {
            let k = ReductionKind::from_name(other)?;
            if k.weyl() == ty {
                vec![Box::new(move || check_reduction(k, &c))]
            } else {
                Vec::new()
            }
        }
    };
    Some(jobs)
}

/// Run the selected checks for the selected types. Reports come back in
/// the order types x checks x generators regardless of scheduling.
pub fn run_suite(
    types: &[WeylType],
    checks: &[String],
    cfg: &CheckConfig,
) -> Vec<VerificationReport> {
    let names: Vec<String> = if checks.iter().any(|c| c == "all") {
        CHECKS.iter().map(|s| s.to_string()).collect()
    } else {
        checks.to_vec()
    };
    let mut jobs: Vec<Job> = Vec::new();
    let mut unknown: Vec<String> = Vec::new();
    for &ty in types {
        for name in &names {
            match jobs_for(ty, name, cfg) {
                Some(js) => jobs.extend(js),
                None if !unknown.contains(name) => unknown.push(name.clone()),
                None => {}
            }
        }
    }
    let fallback_ty = types.first().copied().unwrap_or(WeylType::D4);
    for name in unknown {
        jobs.push(Box::new(move || {
            run_check(
                format!("unknown/{}", name),
                fallback_ty,
                Mode::Symbolic,
                || Err(VerifyError::Other(format!("unknown check '{}'", name))),
            )
        }));
    }
    let mut reports: Vec<VerificationReport> = jobs.par_iter().map(|j| j()).collect();
    for r in reports.iter_mut().filter(|r| r.mode == Mode::Sampled) {
        let tag = format!("seed {}", cfg.seed);
        r.notes = if r.notes.is_empty() {
            tag
        } else {
            format!("{}; {}", r.notes, tag)
        };
    }
    reports
}
