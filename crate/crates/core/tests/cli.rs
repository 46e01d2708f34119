use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn pwl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pwl"))
        .args(args)
        .env_remove("PWL_SEED")
        .output()
        .unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn strip_elapsed(mut v: Value) -> Value {
    for r in v.as_array_mut().unwrap() {
        r.as_object_mut().unwrap().remove("elapsed_ms");
    }
    v
}

#[test]
fn verify_d4_all_passes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d4.json");
    let out = pwl(&[
        "verify",
        "--type",
        "d4",
        "--check",
        "all",
        "--mode",
        "auto",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = read_json(&path);
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 18);
    let keys: Vec<&str> = reports[0]
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    assert_eq!(
        keys,
        [
            "check_id",
            "elapsed_ms",
            "mode",
            "notes",
            "status",
            "weyl_type",
            "witness"
        ]
    );
    assert!(pwl::cli::validate_report(&v).is_ok());
}

#[test]
fn holomorphy_without_atlas_is_skipped() {
    let out = pwl(&["verify", "--type", "g2", "--check", "holomorphy"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[0]["status"], "skip");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(pwl(&["verify", "--type", "bogus"]).status.code(), Some(2));
    assert_eq!(pwl(&["verify", "--check", "nope"]).status.code(), Some(2));
    assert_eq!(
        pwl(&["orbit", "--type", "d4", "--word", "s9"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(pwl(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn same_seed_same_report() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, seed: &str| {
        let p = dir.path().join(name);
        let out = pwl(&[
            "verify",
            "--type",
            "b3",
            "--check",
            "symmetry",
            "coxeter",
            "--mode",
            "sampled",
            "--seed",
            seed,
            "--json",
            p.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        strip_elapsed(read_json(&p))
    };
    assert_eq!(run("a.json", "7"), run("b.json", "7"));
}

#[test]
fn env_seed_overrides_flag() {
    let with_env = |seed: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_pwl"))
            .args([
                "verify", "--type", "d4", "--check", "symmetry", "--mode", "sampled", "--seed", "1",
            ])
            .env("PWL_SEED", seed)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        strip_elapsed(serde_json::from_slice(&out.stdout).unwrap())
    };
    let plain = |seed: &str| {
        let out = pwl(&[
            "verify", "--type", "d4", "--check", "symmetry", "--mode", "sampled", "--seed", seed,
        ]);
        strip_elapsed(serde_json::from_slice(&out.stdout).unwrap())
    };
    assert_eq!(with_env("99"), plain("99"));
    assert_ne!(plain("1"), plain("99"));
    let bad = Command::new(env!("CARGO_BIN_EXE_pwl"))
        .args(["verify", "--type", "d4"])
        .env("PWL_SEED", "x")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn integrate_healthy_spec_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("traj.csv");
    let json = dir.path().join("summary.json");
    let spec = concat!(env!("CARGO_MANIFEST_DIR"), "/data/healthy_spec.json");
    let out = pwl(&[
        "integrate",
        "--spec",
        spec,
        "--csv",
        csv.to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("t,x,y,z\n"));
    let ts: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(ts.windows(2).all(|w| w[0] < w[1]));
    let summary = read_json(&json);
    assert!(summary["residual"]["max"].as_f64().unwrap() < 1e-6);
    assert!(pwl::cli::validate_integrate_summary(&summary).is_ok());
}

#[test]
fn integrate_rejects_bad_normalization() {
    let out = pwl(&[
        "integrate",
        "--type",
        "d4",
        "--params",
        "0.2,0.2,0.2,0.2,0.2",
        "--t0",
        "2.1",
        "--t1",
        "2.5",
        "--state",
        "0.3,0.4,0.5",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr)
        .contains("alpha0 + alpha1 + 2*alpha2 + alpha3 + alpha4 = 1"));
}

#[test]
fn integrate_reports_pole_event() {
    let spec = concat!(env!("CARGO_MANIFEST_DIR"), "/data/healthy_spec.json");
    let out = pwl(&[
        "integrate",
        "--spec",
        spec,
        "--state",
        "5,-5,5",
        "--t1",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["events"][0]["kind"], "pole");
}

#[test]
fn integrate_at_pole_of_b_is_usage_error() {
    let out = pwl(&[
        "integrate",
        "--type",
        "d4",
        "--params",
        "0.2,0.2,0.1,0.2,0.2",
        "--t0",
        "1",
        "--t1",
        "1.5",
        "--state",
        "0.3,0.4,0.5",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn orbit_examples() {
    let out = pwl(&[
        "orbit",
        "--type",
        "d4",
        "--word",
        "s2 s2",
        "--params",
        "1/5,1/5,1/10,1/5,1/5",
    ]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "word: s2 s2\nalpha0 = 1/5\nalpha1 = 1/5\nalpha2 = 1/10\nalpha3 = 1/5\nalpha4 = 1/5\n"
    );

    let out = pwl(&["orbit", "--type", "c2-piii", "--word", "pi"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.contains("alpha0 -> alpha2\n")
            && text.contains("alpha1 -> alpha1\n")
            && text.contains("alpha2 -> alpha0\n"),
        "{}",
        text
    );

    // s0 s1 s3 s4 s2 adds 1/2 to the outer roots and -1 to the central one
    let out = pwl(&[
        "orbit",
        "--type",
        "d4",
        "--word",
        "s0 s1 s3 s4 s2",
        "--params",
        "1/5,1/5,1/10,1/5,1/5",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.contains(
            "alpha0 = 7/10\nalpha1 = 7/10\nalpha2 = -9/10\nalpha3 = 7/10\nalpha4 = 7/10\n"
        ),
        "{}",
        text
    );
}

#[test]
fn orbit_indeterminate_state_fails() {
    // s1 divides by x
    let out = pwl(&[
        "orbit",
        "--type",
        "d4",
        "--word",
        "s1",
        "--params",
        "1/5,1/5,1/10,1/5,1/5",
        "--state",
        "0,1,1",
    ]);
    assert_eq!(
        out.status.code(),
        Some(1),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn dump_is_deterministic() {
    let a = pwl(&["dump", "--type", "d4"]).stdout;
    let b = pwl(&["dump", "--type", "d4"]).stdout;
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text
        .lines()
        .any(|l| l == "4 0 0 0 0 0 0 0 0 0 0 0 0 0 0\t1"));
    let piii = String::from_utf8(pwl(&["dump", "--type", "piii"]).stdout).unwrap();
    assert_eq!(
        piii.lines()
            .filter(|l| l.starts_with("# component"))
            .count(),
        3
    );
}
