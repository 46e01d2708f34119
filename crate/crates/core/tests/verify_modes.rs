use pwl::systems::WeylType;
use pwl::verify::{run_suite, CheckConfig, Mode, RequestedMode, Status};

#[test]
fn symbolic_and_sampled_agree() {
    let checks: Vec<String> = ["symmetry", "involution", "first-integral"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let cfg = CheckConfig::default();
    let sym = run_suite(
        &WeylType::ALL,
        &checks,
        &cfg.with_mode(RequestedMode::Symbolic),
    );
    let smp = run_suite(
        &WeylType::ALL,
        &checks,
        &cfg.with_mode(RequestedMode::Sampled),
    );
    assert_eq!(sym.len(), smp.len());
    let mut compared = 0;
    for (a, b) in sym.iter().zip(&smp) {
        assert_eq!(a.check_id, b.check_id);
        if a.mode != Mode::Symbolic
            || b.mode != Mode::Sampled
            || !matches!(a.status, Status::Pass | Status::Fail)
        {
            continue;
        }
        assert_eq!(a.status, b.status, "{}", a.check_id);
        compared += 1;
    }
    assert!(compared >= 20, "only {} comparable checks", compared);
}

#[test]
fn seeds_change_sample_points_not_verdicts() {
    let checks = vec!["symmetry".to_string()];
    let a = run_suite(
        &[WeylType::B3],
        &checks,
        &CheckConfig {
            seed: 1,
            ..CheckConfig::default()
        }
        .with_mode(RequestedMode::Sampled),
    );
    let b = run_suite(
        &[WeylType::B3],
        &checks,
        &CheckConfig {
            seed: 2,
            ..CheckConfig::default()
        }
        .with_mode(RequestedMode::Sampled),
    );
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.status, Status::Pass, "{}", x.check_id);
        assert_eq!(y.status, Status::Pass, "{}", y.check_id);
    }
}
