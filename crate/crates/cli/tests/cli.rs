//! End-to-end tests of the binary surface: listings, exit codes, report
//! files and determinism.

use std::process::Command;

fn harmonia() -> Command {
    Command::new(env!("CARGO_BIN_EXE_harmonia"))
}

#[test]
fn list_models_contains_catalog_entries() {
    let out = harmonia().args(["list-models"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("nk-s6"));
    assert!(text.contains("sasakian-s5"));
    assert!(text.contains("lcp-spin7"));
}

#[test]
fn list_checks_contains_pair_thm_and_roundtrips_json() {
    let out = harmonia().args(["list-checks"]).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("pair-thm"));
    let out = harmonia()
        .args(["list-checks", "--format", "json"])
        .output()
        .unwrap();
    let parsed: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("valid JSON listing");
    assert!(parsed
        .as_array()
        .unwrap()
        .iter()
        .any(|row| row["name"] == "pair-thm"));
    let out = harmonia()
        .args(["list-models", "--format", "json"])
        .output()
        .unwrap();
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(parsed
        .as_array()
        .unwrap()
        .iter()
        .any(|row| row["id"] == "nk-s6"));
}

#[test]
fn unknown_names_exit_two() {
    let out = harmonia()
        .args(["run", "--model", "no-such-model"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = harmonia()
        .args([
            "run",
            "--model",
            "round-sphere:2",
            "--checks",
            "bogus-check",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = harmonia()
        .args(["run", "--model", "round-sphere:2", "--field", "bogus-field"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn small_survey_run_succeeds_with_json_schema() {
    let dir = std::env::temp_dir().join("harmonia-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("survey.json");
    let out = harmonia()
        .args([
            "run",
            "--model",
            "round-sphere:2",
            "--field",
            "rot-dual",
            "--checks",
            "constant-length",
            "--points",
            "3",
            "--seed",
            "9",
            "--format",
            "json",
            "--out",
            path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let body = std::fs::read_to_string(&path).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&body).unwrap();
    assert_eq!(parsed["schema"], "harmonia/1");
    assert_eq!(parsed["oracle_ok"], true);
}

#[test]
fn regression_negative_control_mismatch_exits_nonzero() {
    // Survey mode on the middle-degree failure case: the check itself fails
    // but survey mode still exits 0 (execution completed).
    let out = harmonia()
        .args([
            "run",
            "--model",
            "lck-cone:3",
            "--field",
            "omega",
            "--checks",
            "harmonic-section",
            "--points",
            "2",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("fail"), "expected a failing row: {text}");
    // Regression mode on the same entry expects the failure and exits 0.
    let out = harmonia()
        .args([
            "run",
            "--model",
            "lck-cone:3",
            "--regression",
            "--points",
            "2",
        ])
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn identical_seeds_give_identical_json_modulo_timestamp() {
    let run = || -> String {
        let out = harmonia()
            .args([
                "run",
                "--model",
                "kenmotsu-exp",
                "--field",
                "eta",
                "--checks",
                "harmonic-section,laplacian-eigen",
                "--points",
                "3",
                "--seed",
                "31",
                "--format",
                "json",
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
        String::from_utf8(out.stdout)
            .unwrap()
            .lines()
            .filter(|l| !l.contains("\"timestamp\""))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let a = run();
    let b = run();
    assert_eq!(a, b);
    assert!(a.contains("\"schema\": \"harmonia/1\""));
}

#[test]
fn csv_dump_has_per_point_rows() {
    let dir = std::env::temp_dir().join("harmonia-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("resid.csv");
    let out = harmonia()
        .args([
            "run",
            "--model",
            "round-sphere:2",
            "--field",
            "vol",
            "--checks",
            "harmonic-section",
            "--points",
            "4",
            "--emit-csv",
            path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("model,field,check,point,residual"));
    assert!(csv.lines().count() >= 5);
}
