use std::path::PathBuf;

use tricat::fixtures::{ext_obstruction, fix_dual, fix_frob, fix_ut2, ut2_negative, Fixture};
use tricat::io::{emit_report, load_manifest, parse_manifest, parse_report, run_suite, Format, Outcome, ResolvedTriple};
use tricat::subcat::{Side, SubcategorySpec};
use tricat::Error;

fn shipped(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

/// Same bimodule, and component inventories with the same members up to
/// isomorphism.
fn same_spec(a: &SubcategorySpec, b: &SubcategorySpec) -> bool {
    a.len() == b.len() && a.members().iter().all(|m| b.lookup(m).unwrap().is_member())
}

fn assert_matches_builder(loaded: &Fixture, built: &Fixture) {
    let (m, n) = (loaded.bimodule(), built.bimodule());
    assert_eq!(m.dim(), n.dim(), "{}", built.name);
    assert_eq!(**m.left_algebra(), **n.left_algebra(), "{}", built.name);
    assert_eq!(**m.right_algebra(), **n.right_algebra(), "{}", built.name);
    assert_eq!(m.left_action(), n.left_action(), "{}", built.name);
    assert_eq!(m.right_action(), n.right_action(), "{}", built.name);
    assert!(same_spec(&loaded.x, &built.x) && same_spec(&loaded.y, &built.y), "{}", built.name);
    assert_eq!(loaded.caps, built.caps, "{}", built.name);
    for side in [Side::E, Side::M] {
        assert_eq!(loaded.category(side).unwrap().len(), built.category(side).unwrap().len(), "{}", built.name);
    }
}

#[test]
fn shipped_categories_match_the_builders() {
    let ut2 = load_manifest(shipped("ut2.json")).unwrap();
    assert_matches_builder(&ut2.categories["ut2"], &fix_ut2());
    let dual = load_manifest(shipped("dual.json")).unwrap();
    assert_matches_builder(&dual.categories["dual"], &fix_dual());
    assert_matches_builder(&dual.categories["ext-obstruction"], &ext_obstruction());
    let frob = load_manifest(shipped("frob.json")).unwrap();
    assert_matches_builder(&frob.categories["frob"], &fix_frob());
    let neg = load_manifest(shipped("negative.json")).unwrap();
    assert_matches_builder(&neg.categories["ut2-negative"], &ut2_negative());
}

#[test]
fn ut2_manifest_shape() {
    let m = load_manifest(shipped("ut2.json")).unwrap();
    assert_eq!(m.algebras.len(), 3);
    assert_eq!(m.bimodules.len(), 1);
    assert_eq!(m.triples.len(), 8);
    assert_eq!(m.algebras["Lambda"].dim(), 3);
    let reph = m.triples.values().filter(|t| matches!(t, ResolvedTriple::Reph(..))).count();
    assert_eq!(reph, 3);
}

#[test]
fn empty_manifest_is_valid() {
    let m = parse_manifest(r#"{"version": 1}"#).unwrap();
    assert!(m.suites.is_empty() && m.algebras.is_empty());
}

#[test]
fn wrong_version_is_rejected() {
    assert!(matches!(parse_manifest(r#"{"version": 2}"#), Err(Error::Malformed(_))));
}

#[test]
fn bad_structure_constants_name_the_basis_triple() {
    // Basis 1, x, y with x y = x and y x = y: (x y) x = x x = 0 but
    // x (y x) = x y = x.
    let text = r#"{
        "version": 1,
        "algebras": { "bad": { "kind": "structure_constants", "p": 2, "dim": 3,
            "mul": [[[1,0,0],[0,1,0],[0,0,1]],
                    [[0,1,0],[0,0,0],[0,1,0]],
                    [[0,0,1],[0,0,1],[0,0,0]]],
            "unit": [1, 0, 0] } }
    }"#;
    let err = parse_manifest(text).unwrap_err();
    let msg = err.to_string();
    assert!(matches!(err, Error::Invalid(_)), "{msg}");
    assert!(msg.contains("algebra bad") && msg.contains("basis triple ("), "{msg}");
}

#[test]
fn parse_errors_carry_a_location() {
    let err = parse_manifest("{\n  \"version\": 1,\n  \"algebras\": [}\n").unwrap_err();
    match err {
        Error::Parse(msg) => assert!(msg.contains("line 3"), "{msg}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn dangling_and_cyclic_references() {
    let dangling = r#"{"version": 1, "modules": {"S": {"kind": "simple", "algebra": "nope"}}}"#;
    let err = parse_manifest(dangling).unwrap_err();
    assert!(matches!(&err, Error::Dangling(m) if m.contains("nope")), "{err}");

    let cyclic = r#"{"version": 1,
        "algebras": {"L": {"kind": "triangular", "bimodule": "M"}},
        "bimodules": {"M": {"kind": "regular", "algebra": "L"}}}"#;
    let err = parse_manifest(cyclic).unwrap_err();
    assert!(err.to_string().contains("cycle"), "{err}");

    let unknown_suite_ref = r#"{"version": 1, "suites": {"s": {"checks": [
        {"name": "c", "check": "frobenius", "category": "missing", "side": "E"}]}}}"#;
    let err = parse_manifest(unknown_suite_ref).unwrap_err();
    assert!(matches!(&err, Error::Dangling(m) if m.contains("check c")), "{err}");
}

#[test]
fn explicit_modules_are_validated() {
    // x acting by the identity is not x^2 = 0.
    let text = r#"{"version": 1,
        "algebras": {"D2": {"kind": "truncated_polynomial", "p": 2, "n": 2}},
        "modules": {"bad": {"kind": "explicit", "algebra": "D2", "dim": 1, "action": [[[1]], [[1]]]}}}"#;
    let err = parse_manifest(text).unwrap_err();
    assert!(err.to_string().contains("module bad"), "{err}");
}

#[test]
fn unknown_suite() {
    let m = parse_manifest(r#"{"version": 1}"#).unwrap();
    assert!(matches!(run_suite(&m, "nope", 0), Err(Error::UnknownSuite(_))));
}

#[test]
fn suite_over_an_empty_inventory_passes_vacuously() {
    let text = r#"{"version": 1,
        "algebras": {"F2": {"kind": "field", "p": 2}},
        "subcategories": {"Z": {"algebra": "F2", "mode": "explicit", "dim_cap": 3}},
        "suites": {"vacuous": {"checks": [
            {"name": "extensions", "check": "closure", "subcategory": "Z", "kind": "extensions"},
            {"name": "summands", "check": "closure", "subcategory": "Z", "kind": "summands"}]}}}"#;
    let m = parse_manifest(text).unwrap();
    let r = run_suite(&m, "vacuous", 0).unwrap();
    assert!(r.checks.iter().all(|c| c.verdict == Outcome::Pass), "{r:?}");
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn ut2_classify_matches_its_golden_file() {
    let m = load_manifest(shipped("ut2.json")).unwrap();
    let r = run_suite(&m, "ut2-classify", 0).unwrap();
    let golden = std::fs::read(shipped("golden/ut2-classify.json")).unwrap();
    assert_eq!(String::from_utf8(emit_report(&r, Format::Json)).unwrap(), String::from_utf8(golden).unwrap());
}

#[test]
fn randomized_suites_keep_their_verdicts_across_seeds() {
    let m = load_manifest(shipped("diagrams.json")).unwrap();
    let golden = parse_report(&std::fs::read(shipped("golden/diagrams.json")).unwrap()).unwrap();
    for seed in [1, 2] {
        let r = run_suite(&m, "diagrams", seed).unwrap();
        assert_eq!(r.verdicts(), golden.verdicts());
    }
}

#[test]
fn refused_checks_name_the_missing_hypothesis() {
    let m = load_manifest(shipped("negative.json")).unwrap();
    let r = run_suite(&m, "ut2-negative", 0).unwrap();
    let rec = r.checks.iter().find(|c| c.check == "recollement").unwrap();
    assert_eq!(rec.verdict, Outcome::Refused);
    assert!(rec.missing_hypothesis.as_deref().unwrap().contains("Frobenius"));
    let text = String::from_utf8(emit_report(&r, Format::Text)).unwrap();
    for c in &r.checks {
        assert!(text.contains(&format!("[{}] {}", c.verdict.as_str(), c.name)));
    }
}
