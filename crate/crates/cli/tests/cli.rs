use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn hmf(args: &[&str], cache: &Path) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hmf"))
        .args(args)
        .env("HMF_CACHE_DIR", cache)
        .output()
        .expect("run hmf");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn schema_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(format!("{name}.schema.json"))
}

fn assert_valid(name: &str, instance: &Value) {
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(schema_path(name)).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}\n{instance}");
}

fn json_of(args: &[&str], cache: &Path) -> (i32, Value) {
    let mut full = args.to_vec();
    full.push("--json");
    let (code, stdout, stderr) = hmf(&full, cache);
    let v = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{e}: {stdout} {stderr}"));
    (code, v)
}

#[test]
fn field_report() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text, _) = hmf(&["field", "--d", "2"], dir.path());
    assert_eq!(code, 0);
    assert!(text.contains("D = 8"), "{text}");
    assert!(text.contains("1+√2"), "{text}");
    let (code, v) = json_of(&["field", "--d", "2"], dir.path());
    assert_eq!(code, 0);
    assert_valid("field", &v);
    assert_eq!(v["discriminant"], 8);
    assert_eq!(v["fundamental_unit"], serde_json::json!(["1", "1"]));
    for d in ["5", "13"] {
        let (code, v) = json_of(&["field", "--d", d], dir.path());
        assert_eq!(code, 0);
        assert_valid("field", &v);
    }
}

#[test]
fn catalog_refusal_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, err) = hmf(&["field", "--d", "3"], dir.path());
    assert_eq!(code, 2);
    assert!(err.contains("norm +1"), "{err}");
    let (code, v) = json_of(&["field", "--d", "3"], dir.path());
    assert_eq!(code, 2);
    assert_valid("error", &v);
    assert_eq!(v["exit_code"], 2);
}

#[test]
fn malformed_specs_exit_before_computing() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(hmf(&["basis", "--level", "q^x"], dir.path()).0, 64);
    assert_eq!(hmf(&["basis", "--level", "q^6", "--char", "bogus"], dir.path()).0, 64);
    assert_eq!(hmf(&["theta", "--box=-3"], dir.path()).0, 64);
    assert_eq!(hmf(&["theta", "--no-such-flag"], dir.path()).0, 64);
    assert_eq!(hmf(&["hecke", "--on", "/nonexistent/f.json"], dir.path()).0, 64);
}

#[test]
fn unit_groups_and_characters() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = json_of(&["unit-group", "--level", "q^5"], dir.path());
    assert_eq!(code, 0);
    assert_valid("unit-group", &v);
    assert_eq!(v["order"], 16);
    assert!(dir.path().read_dir().unwrap().next().is_some(), "cache directory was not populated");
    let (code, again) = json_of(&["unit-group", "--level", "q^5"], dir.path());
    assert_eq!(code, 0);
    assert_eq!(v, again);
    let (code, v) = json_of(&["characters", "--level", "q^5", "--order", "2"], dir.path());
    assert_eq!(code, 0);
    assert_valid("characters", &v);
    assert!(v["characters"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| 2 % c["order"].as_u64().unwrap() == 0));
}

#[test]
fn basis_dimensions_and_refusal() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = json_of(&["basis", "--d", "2", "--level", "q^14", "--char", "phi"], dir.path());
    assert_eq!(code, 0);
    assert_valid("basis", &v);
    assert_eq!(v["dimension"], 6);
    assert_eq!(v["pairs"].as_array().unwrap().len(), 6);
    let (code, v) = json_of(&["basis", "--d", "2", "--level", "q^4", "--char", "phi"], dir.path());
    assert_eq!(code, 0);
    assert_eq!(v["dimension"], 0);
    let (code, _, err) = hmf(&["basis", "--d", "2", "--level", "7", "--char", "trivial"], dir.path());
    assert_eq!(code, 3);
    assert!(err.contains("split"), "{err}");
}

#[test]
fn theta_hecke_and_lseries_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let theta = dir.path().join("theta.json");
    let theta_s = theta.to_str().unwrap();
    let (code, v) = json_of(
        &["theta", "--chi", "trivial", "--t", "1", "--box", "30", "--out", theta_s],
        dir.path(),
    );
    assert_eq!(code, 0);
    assert_valid("expansion", &v);
    let stored: Value = serde_json::from_str(&std::fs::read_to_string(&theta).unwrap()).unwrap();
    assert_valid("expansion", &stored);
    assert_eq!(stored, v);
    let a1 = v["coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e[0] == serde_json::json!(["1", "0"]))
        .unwrap();
    assert_eq!(a1[1], serde_json::json!([1, ["2"]]));

    let image = dir.path().join("t3.json");
    let (code, v) = json_of(
        &["hecke", "--p", "3", "--on", theta_s, "--out", image.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(code, 0);
    assert_valid("hecke", &v);
    assert_eq!(v["proportionality"], serde_json::json!([1, ["10/9"]]));
    let stored: Value = serde_json::from_str(&std::fs::read_to_string(&image).unwrap()).unwrap();
    assert_valid("expansion", &stored);

    let (code, v) = json_of(&["lseries", "--form", theta_s, "--s", "2", "--bound", "40"], dir.path());
    assert_eq!(code, 0);
    assert_valid("lseries", &v);
    assert!(v["difference"].as_f64().unwrap() < 1e-2);
    let (code, _, _) = hmf(&["lseries", "--form", theta_s, "--s", "2", "--bound", "400"], dir.path());
    assert_eq!(code, 4, "a box too small for the bound is reported");
}

#[test]
fn outputs_are_deterministic_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["basis", "--level", "q^10", "--char", "phi", "--seed", "5"];
    let (_, one) = json_of(&[&args[..], &["--threads", "1"]].concat(), dir.path());
    let (_, four) = json_of(&[&args[..], &["--threads", "4"]].concat(), dir.path());
    assert_eq!(one, four);
}

#[test]
fn verify_suites_report_and_exit() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = json_of(&["verify", "--suite", "dimensions", "--n-max", "16"], dir.path());
    assert_eq!(code, 0);
    assert_valid("verify", &v);
    assert_eq!(v["pass"], true);
    let (code, v) = json_of(
        &["verify", "--suite", "hecke-eigen", "--primes", "3,5,3+q", "--n-max", "8"],
        dir.path(),
    );
    assert_eq!(code, 0, "{v}");
    let checks = v["suites"][0]["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c.as_str().unwrap().contains("eigenvalue")));
    let (code, v) = json_of(
        &["verify", "--suite", "modularity", "--n-max", "6", "--samples", "5", "--tol", "1e-6"],
        dir.path(),
    );
    assert_eq!(code, 0, "{v}");
    let (code, _, _) = hmf(&["verify", "--suite", "modularity", "--d", "5"], dir.path());
    assert_eq!(code, 3);
    let (code, _, _) = hmf(&["verify", "--suite", "nonsense"], dir.path());
    assert_ne!(code, 0);
}

#[test]
fn failing_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = json_of(
        &[
            "verify",
            "--suite",
            "modularity",
            "--n-max",
            "5",
            "--samples",
            "3",
            "--tol",
            "1e-40",
        ],
        dir.path(),
    );
    assert_eq!(code, 1, "{v}");
    assert_valid("verify", &v);
    assert_eq!(v["pass"], false);
    assert!(v["suites"][0]["first_failure"].is_string());
}
