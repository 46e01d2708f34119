use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{rat, MultiPoly};
use crate::systems::{build_vector_field, generators, SystemDef, WeylType};

use super::sample::stream_seed;
use super::structure::{first_integral_on, holomorphy_on, FirstIntegralKind};
use super::symmetry::symmetry_sampled;
use super::{first_term, CheckConfig, Sampler, Status, VerifyError};

#[derive(Debug, Clone, Serialize)]
pub struct MutationOutcome {
    pub component: usize,
    pub term: usize,
    /// The perturbed term before the change.
    pub original: String,
    /// Checks that failed on the mutated table.
    pub tripped: Vec<String>,
}

/// Copy of `parts` with the coefficient of term `term` (in ascending order)
/// of component `component` increased by one.
pub fn mutate_coefficient(parts: &[MultiPoly], component: usize, term: usize) -> Vec<MultiPoly> {
    let mut out = parts.to_vec();
    let p = &parts[component];
    let (m, _) = p.terms().nth(term).expect("term index in range");
    out[component] = p + &MultiPoly::monomial(p.table(), m.clone(), rat(1, 1));
    out
}

fn tripped_checks(
    sys: &SystemDef,
    cfg: &CheckConfig,
    id: &str,
) -> Result<Vec<String>, VerifyError> {
    let mut tripped = Vec::new();
    let (elim, _) = sys.eliminated(&[])?;
    if first_integral_on(FirstIntegralKind::D4Eq1, &elim)?.status == Status::Fail {
        tripped.push("first-integral".to_string());
    }
    let mut sampler = Sampler::new(cfg.seed, id, sys.table.clone());
    for g in generators(WeylType::D4)? {
        if symmetry_sampled(sys, &g, &mut sampler, cfg.samples)?.is_some() {
            tripped.push(format!("symmetry/{}", g.name));
            break;
        }
    }
    match holomorphy_on(&elim, cfg.term_cap) {
        Ok(o) if o.status == Status::Fail => tripped.push("holomorphy".to_string()),
        Ok(_) => {}
        Err(e) if e.is_blowup() => {}
        Err(e) => return Err(e),
    }
    Ok(tripped)
}

/// Perturb `count` randomly chosen coefficients of the D4(1) polynomial part
/// one at a time and record which checks notice.
pub fn mutation_study(
    count: usize,
    cfg: &CheckConfig,
) -> Result<Vec<MutationOutcome>, VerifyError> {
    let base = build_vector_field(WeylType::D4, None)?;
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(cfg.seed, "mutation"));
    let mut out = Vec::with_capacity(count);
    for n in 0..count {
        let component = rng.gen_range(0..base.polynomial_part.len());
        let term = rng.gen_range(0..base.polynomial_part[component].len());
        let (m, c) = base.polynomial_part[component].terms().nth(term).unwrap();
        let original = first_term(&MultiPoly::monomial(&base.table, m.clone(), c.clone()));
        let sys = SystemDef {
            polynomial_part: mutate_coefficient(&base.polynomial_part, component, term),
            ..base.clone()
        };
        let tripped = tripped_checks(&sys, cfg, &format!("mutation/{}", n))?;
        out.push(MutationOutcome {
            component,
            term,
            original,
            tripped,
        });
    }
    Ok(out)
}
