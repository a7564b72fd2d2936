use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn minindex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minindex")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn analyze_json(spec: &str, extra: &[&str]) -> serde_json::Value {
    let path = fixture(spec);
    let mut args = vec!["analyze", "--spec", path.to_str().unwrap(), "--json", "-"];
    args.extend_from_slice(extra);
    let out = minindex(&args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

#[test]
fn analyze_sqrt2_with_oracle_agrees() {
    let v = analyze_json("q2_sqrt2.json", &["--oracle"]);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    for k in ["input", "profile", "formulas", "oracle", "agreement", "timing", "precision"] {
        assert!(keys.contains(&k), "missing {k}");
    }
    assert_eq!(v["formulas"]["m"], "2^1");
    assert_eq!(v["oracle"]["m"], "2^1");
    assert_eq!(v["agreement"]["all"], true);
}

#[test]
fn analyze_without_oracle_has_no_verdict() {
    let v = analyze_json("q3_cubic.json", &[]);
    assert_eq!(v["formulas"]["m"], "3^1");
    assert!(v["oracle"].is_null());
    assert!(v["agreement"].is_null());
}

#[test]
fn kummer_formula_value() {
    let v = analyze_json("q3_kummer.json", &[]);
    assert_eq!(v["profile"]["jump"], 3);
    assert_eq!(v["formulas"]["m"], "3^3");
    assert_eq!(v["formulas"]["zeta_p_in_k"], true);
}

#[test]
fn zeta8_over_real_subfield() {
    let v = analyze_json("q2_zeta8_over_real.json", &["--oracle"]);
    assert_eq!(v["formulas"]["values"]["v_p_maximal_order_index"], 2);
    assert_eq!(v["oracle"]["result"]["assoc"]["v_p_index"], 1);
    assert_eq!(v["oracle"]["result"]["free_over_assoc"], true);
}

#[test]
fn non_eisenstein_layer_is_input_error() {
    let path = fixture("not_eisenstein.json");
    let out = minindex(&["analyze", "--spec", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("Eisenstein"));
}

#[test]
fn malformed_and_missing_specs_are_input_errors() {
    let path = fixture("malformed.json");
    assert_eq!(code(&minindex(&["analyze", "--spec", path.to_str().unwrap()])), 2);
    assert_eq!(code(&minindex(&["analyze", "--spec", "/nonexistent/spec.json"])), 2);
    assert_eq!(code(&minindex(&["analyze"])), 2);
}

#[test]
fn small_budget_is_exhaustion() {
    let path = fixture("q3_cubic.json");
    let out = minindex(&["analyze", "--spec", path.to_str().unwrap(), "--oracle", "--budget", "10"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn json_file_round_trips() {
    let dir = std::env::temp_dir().join(format!("minindex-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out_path = dir.join("report.json");
    let spec = fixture("q2_sqrt2.json");
    let out = minindex(&["analyze", "--spec", spec.to_str().unwrap(), "--oracle", "--json", out_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("agreement"));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let doc = minindex::ReportDocument::from_json(&text).unwrap();
    assert_eq!(format!("{}\n", doc.to_json()), text);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn sweep_exit_codes() {
    let out = minindex(&["sweep", "--p", "5", "--e-max", "8"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("0 violations"));
    assert_eq!(code(&minindex(&["sweep", "--p", "6", "--e-max", "3"])), 2);
}

#[test]
fn sweep_json_rows() {
    let out = minindex(&["sweep", "--p", "3", "--e-max", "2", "--json", "-"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r["free"] == true));
}

#[test]
fn catalog_verify_codes() {
    let out = minindex(&["catalog-verify"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("8/8 entries pass"));
    assert_eq!(code(&minindex(&["catalog-verify", "--budget", "1"])), 3);
    assert_eq!(code(&minindex(&["catalog-verify", "--corrupt-expectation"])), 1);
}

#[test]
fn global_codes() {
    let out = minindex(&["global", "--degree", "6", "--ram", "3:1,2"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["valuations"]["3"], 2);
    assert_eq!(v["recombined"]["3"], 2);
    let out = minindex(&["global", "--degree", "20", "--ram", "5:1,4"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["valuations"]["5"], 4);
    assert_eq!(code(&minindex(&["global", "--degree", "4", "--ram", "2:2,1"])), 2);
    assert_eq!(code(&minindex(&["global", "--degree", "6", "--ram", "3-1-2"])), 2);
}
