use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn trireflect(args: &[&str]) -> Output {
    trireflect_in(args, None)
}

fn trireflect_in(args: &[&str], out_dir: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_trireflect"));
    cmd.args(args).env_remove("TRIREFLECT_OUT_DIR");
    if let Some(dir) = out_dir {
        cmd.env("TRIREFLECT_OUT_DIR", dir);
    }
    cmd.output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn lambda1_both_engines() {
    let out = trireflect(&[
        "lambda1", "--n", "5", "--a", "1", "--b", "4", "--engine", "both",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["lambda1"], 3);
    assert_eq!(v["engines_agree"], true);
    assert_eq!(v["canonical"]["b"], 2);
}

#[test]
fn non_generating_set_is_a_usage_error() {
    let out = trireflect(&["lambda1", "--n", "6", "--a", "2", "--b", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("does not generate"));
}

#[test]
fn bad_flags_exit_two() {
    assert_eq!(trireflect(&["lambda1", "--n", "5"]).status.code(), Some(2));
    assert_eq!(
        trireflect(&["verify", "--claim", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(
        trireflect(&["verify", "--claim", "growth", "--n-range", "9..4"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(trireflect(&["sqrt"]).status.code(), Some(2));
}

#[test]
fn sharpness_sweep() {
    let out = trireflect(&["verify", "--claim", "sharpness", "--n-range", "3..200"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["details"].as_array().unwrap().len(), 198);

    let csv = trireflect(&[
        "verify",
        "--claim",
        "sharpness",
        "--n-range",
        "8",
        "--format",
        "csv",
    ]);
    assert_eq!(
        String::from_utf8(csv.stdout).unwrap(),
        "n,a,b,max_refl_len,predicted,match\n8,1,7,5,5,true\n"
    );
}

#[test]
fn failing_claim_exits_one() {
    let out = trireflect(&["verify", "--claim", "prime-lambda-bound", "--n-range", "11"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["passed"], false);
    assert!(v["failure_count"].as_u64().unwrap() > 0);
}

#[test]
fn scan_reports_counterexamples() {
    let out = trireflect(&["scan", "--n-range", "3..8", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("n,a,b,l,stabilizer,reproduced\n"));
    assert!(text.contains("\n8,1,4,2,0 4,true\n"));

    let clean = trireflect(&["scan", "--n-range", "3..7"]);
    assert_eq!(clean.status.code(), Some(0));
    assert_eq!(json(&clean)["confirmed"], true);
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = [
        "verify",
        "--claim",
        "cauchy-davenport",
        "--n-range",
        "5..13",
        "--seed",
        "7",
    ];
    let first = trireflect(&args);
    let second = trireflect(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);

    let survey = ["survey", "--n-range", "3..40"];
    let one = trireflect(&[&survey[..], &["--jobs", "1"]].concat());
    let many = trireflect(&[&survey[..], &["--jobs", "4"]].concat());
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn survey_defaults_to_csv() {
    let out = trireflect(&["survey", "--n-range", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].starts_with("n,a,b,lambda1,"));
    assert!(rows[1].starts_with("5,1,2,3,"));
    assert!(rows[2].starts_with("5,1,3,3,"));
}

#[test]
fn lengths_csv_and_levels() {
    let out = trireflect(&[
        "lengths", "--n", "5", "--a", "1", "--b", "4", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 11);
    assert!(text.starts_with("element,rot,refl_flag,length\n"));

    // level sets are defined for non-generating sets too
    let levels = trireflect(&[
        "lengths", "--n", "6", "--a", "2", "--b", "4", "--levels", "--l-max", "4", "--format",
        "csv",
    ]);
    assert_eq!(levels.status.code(), Some(0));
    let text = String::from_utf8(levels.stdout).unwrap();
    assert!(text.ends_with("4,3,0 2 4\n"), "{text}");
}

#[test]
fn output_destinations() {
    let dir = tempfile::tempdir().unwrap();
    let explicit = dir.path().join("report.json");
    let out = trireflect(&["sqrt", "--n", "25", "--out", explicit.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&explicit).unwrap()).unwrap();
    assert_eq!(v[0]["bound"], 19);

    let out = trireflect_in(&["sqrt", "--n", "25", "--format", "csv"], Some(dir.path()));
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let csv = std::fs::read_to_string(dir.path().join("sqrt.csv")).unwrap();
    assert!(csv.starts_with("n,a,b,max_length,bound,holds,ratio\n25,1,5,"));
}

#[test]
fn scan_resumes_from_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("scan.jsonl");
    let ck = ck.to_str().unwrap();
    let first = trireflect(&["scan", "--n-range", "3..12", "--checkpoint", ck]);
    let second = trireflect(&["scan", "--n-range", "3..12", "--checkpoint", ck]);
    assert_eq!(first.stdout, second.stdout);
    assert!(!std::fs::read_to_string(ck).unwrap().is_empty());
}
