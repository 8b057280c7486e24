use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn tricat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tricat")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn validate_reports_counts() {
    let f = fixture("ut2.json");
    let o = tricat(&["validate", "--fixture", f.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("3 algebras") && stdout(&o).contains("8 triples"), "{}", stdout(&o));
}

#[test]
fn invalid_manifest_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"version": 1, "bimodules": {"M": {"kind": "regular", "algebra": "A"}}}"#).unwrap();
    let o = tricat(&["validate", "--fixture", path.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("no algebra named \"A\""));
}

#[test]
fn suite_run_matches_golden_and_exits_zero() {
    let (f, g) = (fixture("ut2.json"), fixture("golden/ut2-classify.json"));
    let o = tricat(&[
        "suite", "run", "--fixture", f.to_str().unwrap(), "--suite", "ut2-classify", "--golden", g.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("11 checks: 11 pass"));
}

#[test]
fn failing_suite_exits_one() {
    let f = fixture("dual.json");
    let o = tricat(&["suite", "run", "--fixture", f.to_str().unwrap(), "--suite", "obstructions", "--format", "json"]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["checks"][0]["verdict"], "fail");
    assert!(v["checks"][0]["witness"].is_string());
}

#[test]
fn refused_only_exits_two_and_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.json");
    let f = fixture("negative.json");
    let o = tricat(&[
        "recollement", "verify", "--fixture", f.to_str().unwrap(), "--category", "ut2-negative", "--side", "e",
        "--report", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 2);
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(v["checks"][0]["verdict"], "refused");
    assert!(v["checks"][0]["missing_hypothesis"].as_str().unwrap().contains("Frobenius"));
}

#[test]
fn classify_a_single_triple() {
    let f = fixture("ut2.json");
    let o = tricat(&["classify", "--fixture", f.to_str().unwrap(), "--triple", "rep-1-1-id", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["checks"][0]["details"]["projective"], true);
}

#[test]
fn subcat_check_names_the_failing_clause() {
    let f = fixture("dual.json");
    let o = tricat(&[
        "subcat", "check", "--fixture", f.to_str().unwrap(), "--subcategory", "X", "--kind", "coresolving",
        "--bimodule", "S_M",
    ]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("witness: Ext^1_A(M, X) = 0"), "{}", stdout(&o));
    let o = tricat(&["subcat", "check", "--fixture", f.to_str().unwrap(), "--subcategory", "X", "--kind", "extensions"]);
    assert_eq!(code(&o), 0);
    let o = tricat(&["subcat", "check", "--fixture", f.to_str().unwrap(), "--subcategory", "X", "--kind", "bogus"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn diagram_bundle_verifies() {
    let f = fixture("diagrams/bundle.json");
    let o = tricat(&["diagram", "verify", "--fixture", f.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn golden_update_then_compare_with_budget_override() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("golden.json");
    let f = fixture("diagrams.json");
    let (f, g) = (f.to_str().unwrap(), g.to_str().unwrap());
    let o = tricat(&["suite", "golden-update", "--fixture", f, "--suite", "diagrams", "--golden", g, "--seed", "7"]);
    assert_eq!(code(&o), 0);
    let o = tricat(&["suite", "run", "--fixture", f, "--suite", "diagrams", "--golden", g, "--seed", "7"]);
    assert_eq!(code(&o), 0);
    // Another seed keeps the verdicts but not the bytes.
    let o = tricat(&["suite", "run", "--fixture", f, "--suite", "diagrams", "--golden", g, "--seed", "8", "--verdicts-only"]);
    assert_eq!(code(&o), 0);
    let o = tricat(&["suite", "run", "--fixture", f, "--suite", "diagrams", "--golden", g, "--budget-imax", "3"]);
    assert_eq!(code(&o), 1, "the budgets are recorded in the report");
}

#[test]
fn usage_errors_do_not_collide_with_verdict_codes() {
    let o = tricat(&["suite", "run"]);
    assert_eq!(code(&o), 64);
}
