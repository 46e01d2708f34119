use std::sync::OnceLock;

use jsonschema::Validator;
use serde_json::Value;

/// Schema of `pwl verify` output, also shipped as `schema/report.schema.json`.
pub const REPORT_SCHEMA: &str = include_str!("../../schema/report.schema.json");
/// Schema of the `pwl integrate` summary.
pub const INTEGRATE_SCHEMA: &str = include_str!("../../schema/integrate.schema.json");

fn compile(text: &str) -> Validator {
    let schema: Value = serde_json::from_str(text).expect("shipped schema is JSON");
    jsonschema::validator_for(&schema).expect("shipped schema compiles")
}

fn check(v: &Validator, value: &Value) -> Result<(), String> {
    let errors: Vec<String> = v
        .iter_errors(value)
        .map(|e| format!("{} at {}", e, e.instance_path))
        .collect();
    if errors.is_empty() {
        Ok(())
    } else {
        Err(format!(
            "output does not match its schema: {}",
            errors.join("; ")
        ))
    }
}

pub fn validate_report(value: &Value) -> Result<(), String> {
    static V: OnceLock<Validator> = OnceLock::new();
    check(V.get_or_init(|| compile(REPORT_SCHEMA)), value)
}

pub fn validate_integrate_summary(value: &Value) -> Result<(), String> {
    static V: OnceLock<Validator> = OnceLock::new();
    check(V.get_or_init(|| compile(INTEGRATE_SCHEMA)), value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn extra_or_missing_fields_are_rejected() {
        let good = json!([{
            "check_id": "d4/symmetry/s0", "weyl_type": "D4(1)", "mode": "sampled",
            "status": "pass", "witness": null, "notes": "", "elapsed_ms": 3
        }]);
        assert!(validate_report(&good).is_ok());
        let mut extra = good.clone();
        extra[0]["seed"] = json!(1);
        assert!(validate_report(&extra).is_err());
        let mut missing = good.clone();
        missing[0].as_object_mut().unwrap().remove("witness");
        assert!(validate_report(&missing).is_err());
        let mut status = good;
        status[0]["status"] = json!("ok");
        assert!(validate_report(&status).is_err());
    }
}
