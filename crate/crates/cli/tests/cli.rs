use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn scenes() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenes")
}

fn run(args: &[&str], scene: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leafcoh"))
        .args(args)
        .arg("--scene")
        .arg(scene)
        .output()
        .expect("binary runs")
}

fn run_named(args: &[&str], name: &str) -> Output {
    run(args, &scenes().join(name))
}

fn run_inline(args: &[&str], scene: &str) -> Output {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scene.json");
    std::fs::write(&path, scene).unwrap();
    run(args, &path)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn operators_suite_passes() {
    let out = run_named(&["check", "--suite", "operators", "--trials", "40"], "operators_m2.json");
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = json(&out);
    assert_eq!(report["suite"], "operators");
    assert!(report["identities"].as_array().unwrap().len() > 5);
}

#[test]
fn malformed_series_is_an_input_error() {
    let out = run_inline(
        &["check", "--suite", "operators"],
        r#"{"model": {"m": 1, "n": 0, "budget": 2, "f": "1 + z1 ^"}, "seed": 1}"#,
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("position"), "{}", stderr(&out));
}

#[test]
fn unknown_suite_and_missing_seed_are_input_errors() {
    let out = run_named(&["check", "--suite", "nonsense"], "operators_m2.json");
    assert_eq!(out.status.code(), Some(2));
    let out = run_inline(&["check", "--suite", "operators"], r#"{"model": {"m": 1, "n": 0, "budget": 2}}"#);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("seed"));
}

#[test]
fn rescale_with_non_unit_is_skipped() {
    let out = run_named(&["check", "--suite", "rescale"], "rescale_nonunit.json");
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    for id in report["identities"].as_array().unwrap() {
        assert_eq!(id["skipped"], "non-unit");
    }
}

#[test]
fn unit_twist_table_matches_untwisted() {
    let twisted = run_named(&["cohomology"], "dolbeault_unit_twist.json");
    let plain = run_inline(
        &["cohomology"],
        r#"{"model": {"m": 1, "n": 0, "budget": 2}, "grid": {"p": [0, 1], "q": [0, 1], "D": [1, 2]}}"#,
    );
    assert_eq!(twisted.status.code(), Some(0));
    let dims = |o: &Output| -> Vec<u64> {
        json(o)["rows"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| r["dim"].as_u64().unwrap())
            .collect()
    };
    assert_eq!(dims(&twisted), dims(&plain));
}

#[test]
fn bott_chern_of_functions_on_a_disc() {
    let out = run_inline(
        &["cohomology", "--variant", "bc"],
        r#"{"model": {"m": 1, "n": 0, "budget": 2}, "grid": {"p": [0], "q": [0], "D": [2]}}"#,
    );
    assert_eq!(json(&out)["rows"][0]["dim"], 1);
}

#[test]
fn grid_outside_range_is_an_input_error() {
    let out = run_inline(&["cohomology"], r#"{"model": {"m": 1, "n": 0, "budget": 2}, "grid": {"q": [0, 2]}}"#);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cohomology_csv_has_header_and_rows() {
    let out = run_named(&["cohomology", "--format", "csv"], "dolbeault_unit_twist.json");
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "variant,p,q,D,ker,im,dim,stable");
    assert_eq!(lines.len(), 9);
}

#[test]
fn relative_identity_is_acyclic() {
    let out = run_named(&["sequence", "--kind", "relative"], "relative_identity.json");
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = json(&out);
    assert!(report["relative_dims"].as_array().unwrap().iter().all(|d| d == 0));
    let nodes = report["les"]["nodes"].as_array().unwrap();
    assert!(nodes.iter().all(|n| n["exact"] == true));
}

#[test]
fn corollary_and_delta_pass_on_square_map() {
    let out = run_named(&["sequence", "--kind", "corollary28"], "relative_square.json");
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(json(&out)["items"].as_array().unwrap().len(), 5);
    let out = run_named(&["sequence", "--kind", "delta"], "relative_square.json");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], true);
}

#[test]
fn laurent_cover_is_exact() {
    let out = run_named(&["sequence", "--kind", "mv"], "mv_laurent.json");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["les"]["exact"], true);
}

#[test]
fn residue_cover_failure_matches_expectation() {
    let out = run_named(&["sequence", "--kind", "mv"], "mv_residue.json");
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["ses_valid"], false);
    assert_eq!(report["finding"]["grade"], 1);
    let out = run_inline(
        &["sequence", "--kind", "mv"],
        r#"{"model": {"m": 1, "n": 0, "budget": 2}, "cover": {"fixture": "residue", "D": 2}}"#,
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_fixture_is_an_input_error() {
    let out = run_inline(&["sequence", "--kind", "mv"], r#"{"model": {"m": 1, "n": 0, "budget": 2}}"#);
    assert_eq!(out.status.code(), Some(2));
    let out = run_inline(&["sequence", "--kind", "delta"], r#"{"model": {"m": 1, "n": 0, "budget": 2}}"#);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solve_zero_target() {
    let out = run_inline(
        &["solve"],
        r#"{"model": {"m": 1, "n": 0, "budget": 2, "f": "1 + z1"}, "target": {"p": 0, "q": 1, "terms": []}}"#,
    );
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["status"], "found");
    assert_eq!(report["primitive"]["terms"].as_array().unwrap().len(), 0);
}

#[test]
fn solve_certified_primitive() {
    let out = run_named(&["solve"], "solve_exact.json");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["status"], "found");
}

#[test]
fn solve_rejects_non_closed_target() {
    let out = run_named(&["solve"], "solve_not_closed.json");
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["status"], "not_closed");
    assert!(stderr(&out).contains("residual"));
}

#[test]
fn solve_tilde_pair() {
    // The image of (z1, 0) under the cone differential of the square map.
    let out = run_inline(
        &["solve"],
        r#"{"model": {"m": 1, "n": 0, "budget": 4},
            "morphism": {"z_components": ["z1^2"]},
            "f_prime": "1",
            "target": {"phi": {"p": 0, "q": 1, "terms": []},
                       "psi": {"p": 0, "q": 0, "terms": [{"A": [], "B": [], "coeff": "z1^2"}]}},
            "slack": 1}"#,
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(json(&out)["status"], "found");
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    for (args, scene) in [
        (vec!["check", "--suite", "intertwine", "--trials", "20"], "intertwine_square.json"),
        (vec!["check", "--suite", "leibniz", "--trials", "20", "--format", "csv"], "operators_m2.json"),
        (vec!["sequence", "--kind", "relative"], "relative_square.json"),
    ] {
        let mut outputs = Vec::new();
        for i in 0..2 {
            let path = dir.path().join(format!("{i}.out"));
            let mut a = args.clone();
            let p = path.to_str().unwrap().to_owned();
            a.extend(["--out", &p]);
            let out = run_named(&a, scene);
            assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
            outputs.push(std::fs::read(&path).unwrap());
        }
        assert_eq!(outputs[0], outputs[1]);
        assert!(!outputs[0].is_empty());
    }
}

#[test]
fn seed_flag_overrides_scene() {
    let a = run_named(&["check", "--suite", "leibniz", "--trials", "5", "--seed", "1"], "operators_m2.json");
    let b = run_named(&["check", "--suite", "leibniz", "--trials", "5", "--seed", "2"], "operators_m2.json");
    assert_eq!(json(&a)["seed"], 1);
    assert_eq!(json(&b)["seed"], 2);
}
