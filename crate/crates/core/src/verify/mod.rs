//! Executable checks over the systems and their symmetries. Every check
//! yields a [`VerificationReport`].

mod mutation;
mod reductions;
mod sample;
mod structure;
mod suite;
mod symmetry;

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, MultiPoly, DEFAULT_TERM_CAP};
use crate::birational::BirationalError;
use crate::systems::{SystemError, WeylType};

pub use mutation::{mutate_coefficient, mutation_study, MutationOutcome};
pub use reductions::{check_reduction, ReductionKind};
pub use sample::{format_point, stream_seed, Sampler, SAMPLE_RANGE};
pub use structure::{
    check_first_integral, check_holomorphy, check_invariant_divisors, FirstIntegralKind,
};
pub use suite::{check_names, run_suite};
pub use symmetry::{
    check_coxeter, check_involution, check_param_actions, check_poisson_series, check_symmetry,
    check_symmetry_map,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Symbolic,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Blowup,
    Skip,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub check_id: String,
    pub weyl_type: WeylType,
    pub mode: Mode,
    pub status: Status,
    pub witness: Option<String>,
    pub notes: String,
    /// Wall-clock time; the only field that varies between identical runs.
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        matches!(self.status, Status::Pass | Status::Skip)
    }
}

/// Mode requested by the caller; `Auto` is symbolic with a sampled fallback
/// on blowup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RequestedMode {
    Symbolic,
    Sampled,
    Auto,
}

impl RequestedMode {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "symbolic" => Some(RequestedMode::Symbolic),
            "sampled" => Some(RequestedMode::Sampled),
            "auto" => Some(RequestedMode::Auto),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckConfig {
    pub seed: u64,
    pub mode: RequestedMode,
    pub term_cap: usize,
    pub samples: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            seed: 212,
            mode: RequestedMode::Auto,
            term_cap: DEFAULT_TERM_CAP,
            samples: 20,
        }
    }
}

impl CheckConfig {
    pub fn with_mode(&self, mode: RequestedMode) -> Self {
        CheckConfig {
            mode,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum VerifyError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Birational(#[from] BirationalError),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error("{0}")]
    Other(String),
}

impl VerifyError {
    fn is_blowup(&self) -> bool {
        matches!(
            self,
            VerifyError::Algebra(AlgebraError::Blowup { .. })
                | VerifyError::Birational(BirationalError::Algebra(AlgebraError::Blowup { .. }))
                | VerifyError::System(SystemError::Algebra(AlgebraError::Blowup { .. }))
        )
    }
}

/// Result of a check body before timing is attached.
#[derive(Debug, Clone)]
pub(crate) struct Outcome {
    pub mode: Mode,
    pub status: Status,
    pub witness: Option<String>,
    pub notes: Vec<String>,
}

impl Outcome {
    pub fn pass(mode: Mode) -> Self {
        Outcome {
            mode,
            status: Status::Pass,
            witness: None,
            notes: Vec::new(),
        }
    }

    pub fn fail(mode: Mode, witness: impl Into<String>) -> Self {
        Outcome {
            mode,
            status: Status::Fail,
            witness: Some(witness.into()),
            notes: Vec::new(),
        }
    }

    pub fn skip(mode: Mode, note: impl Into<String>) -> Self {
        Outcome {
            mode,
            status: Status::Skip,
            witness: None,
            notes: vec![note.into()],
        }
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }

    /// Pass when `witness` is `None`.
    pub fn from_witness(mode: Mode, witness: Option<String>) -> Self {
        match witness {
            None => Outcome::pass(mode),
            Some(w) => Outcome::fail(mode, w),
        }
    }
}

pub(crate) fn run_check(
    check_id: String,
    ty: WeylType,
    default_mode: Mode,
    body: impl FnOnce() -> Result<Outcome, VerifyError>,
) -> VerificationReport {
    let start = Instant::now();
    let outcome = match body() {
        Ok(o) => o,
        Err(e) if e.is_blowup() => Outcome {
            mode: Mode::Symbolic,
            status: Status::Blowup,
            witness: None,
            notes: vec![e.to_string()],
        },
        Err(e) => Outcome::fail(default_mode, format!("error: {}", e)),
    };
    VerificationReport {
        check_id,
        weyl_type: ty,
        mode: outcome.mode,
        status: outcome.status,
        witness: outcome.witness,
        notes: outcome.notes.join("; "),
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

/// Run `symbolic`, falling back to `sampled` on blowup when the mode allows.
pub(crate) fn with_fallback(
    mode: RequestedMode,
    symbolic: impl FnOnce() -> Result<Outcome, VerifyError>,
    sampled: impl FnOnce() -> Result<Outcome, VerifyError>,
) -> Result<Outcome, VerifyError> {
    match mode {
        RequestedMode::Sampled => sampled(),
        RequestedMode::Symbolic => symbolic(),
        RequestedMode::Auto => match symbolic() {
            Err(e) if e.is_blowup() => {
                Ok(sampled()?.note(format!("symbolic mode: {}; fell back to sampling", e)))
            }
            other => other,
        },
    }
}

/// The first (graded-lex largest) term of a nonzero polynomial.
pub(crate) fn first_term(p: &MultiPoly) -> String {
    match p.leading_term() {
        Some((m, c)) => MultiPoly::monomial(p.table(), m.clone(), c.clone()).to_string(),
        None => "0".to_string(),
    }
}
