//! The `pwl` command line.
//!
//! Exit codes: 0 when everything passed, 1 when a check failed (or an orbit
//! hit an indeterminate point), 2 for usage errors and parameter vectors that
//! violate the normalization.

mod schema;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::algebra::{fmt_rational, parse_rational, MultiPoly, Rational, DEFAULT_TERM_CAP};
use crate::birational::{parse_word, SampledWord};
use crate::numerics::{self, IntegrationSpec, NumericModel, NumericsError, ResidualStats};
use crate::systems::{build_vector_field, component_labels, d4, BSpec, WeylType};
use crate::verify::{run_suite, CheckConfig, RequestedMode, VerificationReport};

pub use schema::{validate_integrate_summary, validate_report, INTEGRATE_SCHEMA, REPORT_SCHEMA};

/// Environment variable that overrides `--seed`.
pub const SEED_ENV: &str = "PWL_SEED";

const MIN_TERM_CAP: usize = 1000;

#[derive(Debug, Parser)]
#[command(
    name = "pwl",
    version,
    about = "Verify and integrate affine-Weyl-symmetric Painleve-type systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run verification checks and emit a JSON report.
    Verify(VerifyArgs),
    /// Integrate a system numerically.
    Integrate(IntegrateArgs),
    /// Apply a word of generators to parameters and, optionally, a state.
    Orbit(OrbitArgs),
    /// Print the polynomial part of a vector field, one monomial per line.
    Dump(DumpArgs),
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Type name or `all`.
    #[arg(long = "type", default_value = "all")]
    ty: String,
    /// Check names or `all`.
    #[arg(long, num_args = 1.., default_value = "all")]
    check: Vec<String>,
    /// symbolic, sampled or auto.
    #[arg(long, default_value = "auto")]
    mode: String,
    #[arg(long, default_value_t = 212)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_TERM_CAP)]
    term_cap: usize,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct IntegrateArgs {
    /// JSON integration spec; the other flags override its fields.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long = "type")]
    ty: Option<String>,
    /// Comma-separated parameter values.
    #[arg(long, allow_hyphen_values = true)]
    params: Option<String>,
    /// generic or pvi-form.
    #[arg(long)]
    b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    t0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t1: Option<f64>,
    /// Comma-separated initial values of the dependent variables.
    #[arg(long, allow_hyphen_values = true)]
    state: Option<String>,
    /// Fix a constant symbol, e.g. `--const eta=2`.
    #[arg(long = "const", value_name = "NAME=VALUE", allow_hyphen_values = true)]
    constants: Vec<String>,
    #[arg(long)]
    rel_tol: Option<f64>,
    #[arg(long)]
    abs_tol: Option<f64>,
    #[arg(long)]
    max_magnitude: Option<f64>,
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write the JSON summary here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OrbitArgs {
    #[arg(long = "type")]
    ty: String,
    /// Generators applied left to right, e.g. "s0 s2 pi".
    #[arg(long)]
    word: String,
    /// Comma-separated exact values such as `1/5,0.2,-3`.
    #[arg(long, allow_hyphen_values = true)]
    params: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    state: Option<String>,
    /// Value of another symbol, e.g. `--const eta=2`.
    #[arg(long = "const", value_name = "NAME=VALUE", allow_hyphen_values = true)]
    constants: Vec<String>,
}

#[derive(Debug, Args)]
struct DumpArgs {
    #[arg(long = "type")]
    ty: String,
}

/// Settings shared by the verification commands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub mode: RequestedMode,
    pub term_cap: usize,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.term_cap < MIN_TERM_CAP {
            return Err(format!("term cap must be at least {}", MIN_TERM_CAP));
        }
        Ok(())
    }

    pub fn check_config(&self) -> CheckConfig {
        CheckConfig {
            seed: self.seed,
            mode: self.mode,
            term_cap: self.term_cap,
            ..CheckConfig::default()
        }
    }
}

/// Failure of a command together with its exit code.
#[derive(Debug)]
struct Exit(i32, String);

fn usage(msg: impl Into<String>) -> Exit {
    Exit(2, msg.into())
}

fn io_err(e: io::Error) -> Exit {
    Exit(1, e.to_string())
}

/// Run the CLI on `args` (including the program name). Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{}", e)
            } else {
                write!(err, "{}", e)
            };
            return code;
        }
    };
    let res = match cli.command {
        Command::Verify(a) => cmd_verify(a, out, err),
        Command::Integrate(a) => cmd_integrate(a, out, err),
        Command::Orbit(a) => cmd_orbit(a, out),
        Command::Dump(a) => cmd_dump(a, out),
    };
    match res {
        Ok(code) => code,
        Err(Exit(code, msg)) => {
            let _ = writeln!(err, "error: {}", msg);
            code
        }
    }
}

fn parse_type(name: &str) -> Result<WeylType, Exit> {
    WeylType::from_name(name).map_err(|e| usage(e.to_string()))
}

fn env_seed() -> Result<Option<u64>, Exit> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| usage(format!("{} is not an unsigned integer: {}", SEED_ENV, v))),
        Err(_) => Ok(None),
    }
}

fn write_to(path: &Path, text: &str) -> Result<(), Exit> {
    std::fs::write(path, text).map_err(|e| Exit(1, format!("{}: {}", path.display(), e)))
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Exit> {
    let types = if a.ty == "all" {
        WeylType::ALL.to_vec()
    } else {
        vec![parse_type(&a.ty)?]
    };
    let mode = RequestedMode::from_name(&a.mode)
        .ok_or_else(|| usage(format!("unknown mode '{}'", a.mode)))?;
    let known = crate::verify::check_names();
    for c in &a.check {
        if c != "all" && !known.contains(&c.as_str()) {
            return Err(usage(format!(
                "unknown check '{}' (known: all, {})",
                c,
                known.join(", ")
            )));
        }
    }
    let cfg = RunConfig {
        seed: env_seed()?.unwrap_or(a.seed),
        mode,
        term_cap: a.term_cap,
        output: a.json,
    };
    cfg.validate().map_err(usage)?;
    let reports = run_suite(&types, &a.check, &cfg.check_config());
    let text = report_json(&reports)?;
    match &cfg.output {
        Some(p) => {
            write_to(p, &text)?;
            for r in &reports {
                let status = serde_json::to_value(r.status).map_err(|e| Exit(1, e.to_string()))?;
                writeln!(out, "{:<6} {}", status.as_str().unwrap_or("?"), r.check_id)
                    .map_err(io_err)?;
            }
        }
        None => writeln!(out, "{}", text).map_err(io_err)?,
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    if failed > 0 {
        writeln!(err, "{} of {} checks did not pass", failed, reports.len()).map_err(io_err)?;
        return Ok(1);
    }
    Ok(0)
}

/// Serialize and validate a report list.
pub fn report_json(reports: &[VerificationReport]) -> Result<String, ExitError> {
    let value = serde_json::to_value(reports).map_err(|e| ExitError(e.to_string()))?;
    validate_report(&value).map_err(ExitError)?;
    serde_json::to_string_pretty(&value).map_err(|e| ExitError(e.to_string()))
}

/// Output that does not match its schema, or could not be produced.
#[derive(Debug, Clone, PartialEq)]
pub struct ExitError(pub String);

impl From<ExitError> for Exit {
    fn from(e: ExitError) -> Self {
        Exit(1, e.0)
    }
}

fn split_list(text: &str) -> Vec<&str> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect()
}

fn parse_floats(what: &str, text: &str) -> Result<Vec<f64>, Exit> {
    split_list(text)
        .into_iter()
        .map(|s| {
            s.parse()
                .map_err(|_| usage(format!("bad {} value '{}'", what, s)))
        })
        .collect()
}

fn parse_consts<T>(
    items: &[String],
    parse: impl Fn(&str) -> Option<T>,
) -> Result<BTreeMap<String, T>, Exit> {
    items
        .iter()
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| usage(format!("expected NAME=VALUE, got '{}'", kv)))?;
            let v = parse(v.trim()).ok_or_else(|| usage(format!("bad value in '{}'", kv)))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

fn build_spec(a: &IntegrateArgs) -> Result<IntegrationSpec, Exit> {
    let mut spec = match &a.spec {
        Some(p) => {
            let text =
                std::fs::read_to_string(p).map_err(|e| usage(format!("{}: {}", p.display(), e)))?;
            serde_json::from_str(&text).map_err(|e| usage(format!("{}: {}", p.display(), e)))?
        }
        None => {
            let ty = parse_type(
                a.ty.as_deref()
                    .ok_or_else(|| usage("--type or --spec is required"))?,
            )?;
            let need = |v: &Option<String>, f: &str| {
                v.clone()
                    .ok_or_else(|| usage(format!("--{} is required", f)))
            };
            IntegrationSpec {
                weyl: ty,
                params: parse_floats("parameter", &need(&a.params, "params")?)?,
                constants: BTreeMap::new(),
                b: BSpec::PviForm,
                t0: a.t0.ok_or_else(|| usage("--t0 is required"))?,
                t1: a.t1.ok_or_else(|| usage("--t1 is required"))?,
                initial_state: parse_floats("state", &need(&a.state, "state")?)?,
                rel_tol: 1e-10,
                abs_tol: 1e-12,
                max_magnitude: 1e8,
            }
        }
    };
    if let Some(t) = &a.ty {
        spec.weyl = parse_type(t)?;
    }
    if let Some(p) = &a.params {
        spec.params = parse_floats("parameter", p)?;
    }
    if let Some(b) = &a.b {
        spec.b = BSpec::from_name(b).map_err(|e| usage(e.to_string()))?;
    }
    if let Some(s) = &a.state {
        spec.initial_state = parse_floats("state", s)?;
    }
    spec.t0 = a.t0.unwrap_or(spec.t0);
    spec.t1 = a.t1.unwrap_or(spec.t1);
    spec.rel_tol = a.rel_tol.unwrap_or(spec.rel_tol);
    spec.abs_tol = a.abs_tol.unwrap_or(spec.abs_tol);
    spec.max_magnitude = a.max_magnitude.unwrap_or(spec.max_magnitude);
    spec.constants
        .extend(parse_consts(&a.constants, |v| v.parse::<f64>().ok())?);
    Ok(spec)
}

#[derive(Debug, Serialize)]
struct IntegrateSummary<'a> {
    spec: &'a IntegrationSpec,
    events: &'a [numerics::Event],
    accepted: usize,
    rejected: usize,
    warnings: &'a [String],
    samples: usize,
    final_state: &'a [f64],
    residual: Option<ResidualStats>,
}

fn cmd_integrate(a: IntegrateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Exit> {
    let spec = build_spec(&a)?;
    let model = NumericModel::new(&spec).map_err(|e| match e {
        NumericsError::System(_)
        | NumericsError::Normalization { .. }
        | NumericsError::BadSpec(_) => usage(e.to_string()),
        NumericsError::ImmediateSingularity(_) => usage(e.to_string()),
        _ => Exit(1, e.to_string()),
    })?;
    let traj = numerics::integrate(&spec).map_err(|e| Exit(1, e.to_string()))?;
    let residual = if traj.samples.len() >= 2 {
        numerics::residual(&model, &traj).ok()
    } else {
        None
    };
    let summary = IntegrateSummary {
        spec: &spec,
        events: &traj.events,
        accepted: traj.accepted,
        rejected: traj.rejected,
        warnings: &traj.warnings,
        samples: traj.samples.len(),
        final_state: &traj.samples[traj.samples.len() - 1].state,
        residual,
    };
    let value = serde_json::to_value(&summary).map_err(|e| Exit(1, e.to_string()))?;
    validate_integrate_summary(&value).map_err(|e| Exit(1, e))?;
    let text = serde_json::to_string_pretty(&value).map_err(|e| Exit(1, e.to_string()))?;
    if let Some(p) = &a.csv {
        let f = File::create(p).map_err(|e| Exit(1, format!("{}: {}", p.display(), e)))?;
        let mut w = BufWriter::new(f);
        numerics::write_csv(&traj, spec.weyl.variable_names(), &mut w).map_err(io_err)?;
        w.flush().map_err(io_err)?;
    }
    match &a.json {
        Some(p) => write_to(p, &text)?,
        None => writeln!(out, "{}", text).map_err(io_err)?,
    }
    for w in &traj.warnings {
        writeln!(err, "warning: {}", w).map_err(io_err)?;
    }
    Ok(0)
}

fn parse_exact(what: &str, text: &str) -> Result<Vec<Rational>, Exit> {
    split_list(text)
        .into_iter()
        .map(|s| parse_rational(s).map_err(|_| usage(format!("bad {} value '{}'", what, s))))
        .collect()
}

fn cmd_orbit(a: OrbitArgs, out: &mut dyn Write) -> Result<i32, Exit> {
    let ty = parse_type(&a.ty)?;
    let maps = parse_word(ty, &a.word).map_err(|e| usage(e.to_string()))?;
    if maps.is_empty() {
        return Err(usage("empty word"));
    }
    let word = SampledWord { maps };
    let action = word.param_action();
    let names = ty.parameter_names();
    let table = ty.table();
    let params = match &a.params {
        None => None,
        Some(p) => {
            let v = parse_exact("parameter", p)?;
            if v.len() != names.len() {
                return Err(usage(format!(
                    "{} takes {} parameters, got {}",
                    ty,
                    names.len(),
                    v.len()
                )));
            }
            let res = crate::systems::numeric_residual(ty, &v).map_err(|e| usage(e.to_string()))?;
            if !num_traits::Zero::is_zero(&res) {
                return Err(usage(format!(
                    "parameters violate {} (residual {})",
                    ty.normalization().describe(names),
                    fmt_rational(&res)
                )));
            }
            Some(v)
        }
    };
    writeln!(
        out,
        "word: {}",
        a.word.split_whitespace().collect::<Vec<_>>().join(" ")
    )
    .map_err(io_err)?;
    match &params {
        Some(v) => {
            for (n, val) in names.iter().zip(action.apply_numeric(v)) {
                writeln!(out, "{} = {}", n, fmt_rational(&val)).map_err(io_err)?;
            }
        }
        None => {
            let images: Vec<MultiPoly> = action.images(&table);
            for (n, img) in names.iter().zip(images) {
                writeln!(out, "{} -> {}", n, img).map_err(io_err)?;
            }
        }
    }
    let Some(state_text) = &a.state else {
        return Ok(0);
    };
    let Some(params) = params else {
        return Err(usage("--state needs numeric --params"));
    };
    let vars = ty.variable_names();
    let state = parse_exact("state", state_text)?;
    if state.len() != vars.len() {
        return Err(usage(format!(
            "{} has {} variables, got {} values",
            ty,
            vars.len(),
            state.len()
        )));
    }
    let mut point = vec![Rational::from_integer(0.into()); table.len()];
    if table.try_index("eta").is_some() && !names.contains(&"eta") {
        point[table.index("eta").unwrap()] = Rational::from_integer(2.into());
    }
    for (k, v) in parse_consts(&a.constants, |v| parse_rational(v).ok())? {
        let i = table
            .try_index(&k)
            .ok_or_else(|| usage(format!("unknown symbol '{}'", k)))?;
        if names.contains(&k.as_str()) || vars.contains(&k.as_str()) {
            return Err(usage(format!("'{}' is not a constant", k)));
        }
        point[i] = v;
    }
    for (n, v) in names.iter().zip(&params).chain(vars.iter().zip(&state)) {
        point[table.index(n).unwrap()] = v.clone();
    }
    match word.apply(&point) {
        Ok(img) => {
            for n in vars {
                writeln!(
                    out,
                    "{} = {}",
                    n,
                    fmt_rational(&img[table.index(n).unwrap()])
                )
                .map_err(io_err)?;
            }
            Ok(0)
        }
        Err(e) => Err(Exit(1, e.to_string())),
    }
}

fn cmd_dump(a: DumpArgs, out: &mut dyn Write) -> Result<i32, Exit> {
    let ty = parse_type(&a.ty)?;
    let sys = build_vector_field(ty, None).map_err(|e| Exit(1, e.to_string()))?;
    let text = d4::write_dump(ty.tag(), &component_labels(ty), &sys.polynomial_part);
    write!(out, "{}", text).map_err(io_err)?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("pwl").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn small_term_cap_is_rejected() {
        let (code, _, err) = run_capture(&[
            "verify",
            "--type",
            "d4",
            "--check",
            "symmetry",
            "--term-cap",
            "10",
        ]);
        assert_eq!(code, 2, "{}", err);
        let cfg = RunConfig {
            seed: 1,
            mode: RequestedMode::Auto,
            term_cap: 1000,
            output: None,
        };
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn bad_mode_and_missing_subcommand() {
        assert_eq!(run_capture(&["verify", "--mode", "fast"]).0, 2);
        assert_eq!(run_capture(&[]).0, 2);
    }

    #[test]
    fn symbolic_orbit() {
        let (code, out, _) = run_capture(&["orbit", "--type", "c2-piii", "--word", "pi"]);
        assert_eq!(code, 0);
        assert!(out.contains("alpha0 -> alpha2"), "{}", out);
        assert!(out.contains("alpha2 -> alpha0"), "{}", out);
    }
}
