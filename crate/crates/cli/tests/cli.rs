use std::path::Path;
use std::process::{Command, Output};

use pinchwarp::report::{CertifyResult, Report, SWEEP_CSV_HEADER};
use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pinchwarp"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn analyze_heisenberg() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["analyze", "--builtin", "heis3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["k"], 2);
    assert_eq!(v["series_dims"], serde_json::json!([3, 1, 0]));
    assert_eq!(v["level_dims"], serde_json::json!([2, 1]));
}

#[test]
fn abelian_certificate_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["certify", "--builtin", "abelian:3", "--epsilon", "0.5"],
    );
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["s"], 1.0);
    assert!((v["global"]["ratio"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(v["search"]["passing_s"], 1.0);
}

#[test]
fn small_scale_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["certify", "--builtin", "heis3", "--s", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["verdict"], "fail");
    assert!(v["global"]["max"].as_f64().unwrap() > -1.0 + 1e-6);
}

#[test]
fn exhausted_search_reports_last_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &[
            "certify",
            "--builtin",
            "heis3",
            "--s-max",
            "2",
            "--restarts",
            "4",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["s"], 2.0);
    assert_eq!(v["search"]["passing_s"], Value::Null);
    assert!(v["search"]["blocking"].as_str().is_some());
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("dup.json");
    std::fs::write(&file, r#"{"dim":3,"brackets":[[1,2,3,1.0],[1,2,3,1.0]]}"#).unwrap();
    let out = run(
        dir.path(),
        &["analyze", "--algebra", file.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("brackets[1]"), "{err}");
    assert!(out.stdout.is_empty());

    let out = run(dir.path(), &["analyze", "--builtin", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(dir.path(), &["certify", "--builtin", "heis3", "--s", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(
        dir.path(),
        &["sweep", "--builtin", "heis3", "--eps-list", "0.1,0.5"],
    );
    assert_eq!(out.status.code(), Some(2));
    let out = run(
        dir.path(),
        &["analyze", "--builtin", "heis3", "--format", "csv"],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_jacobi_file_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    // [X1,X2]=X3, [X2,X3]=X1, [X3,X1]=X2 with a sign flip breaks Jacobi.
    std::fs::write(
        &file,
        r#"{"dim":3,"brackets":[[1,2,3,1.0],[2,3,1,1.0],[3,1,2,2.0]]}"#,
    )
    .unwrap();
    let out = run(
        dir.path(),
        &["analyze", "--algebra", file.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_csv_layout() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["sweep", "--builtin", "abelian:2", "--eps-list", "0.5,0.25"],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(SWEEP_CSV_HEADER));
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("0.5,1.0,"));
    assert!(rows.iter().all(|r| r.ends_with(",true")));
}

#[test]
fn rerun_reproduces_report() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.json");
    let second = dir.path().join("second.json");
    let out = run(
        dir.path(),
        &[
            "certify",
            "--builtin",
            "filiform:4",
            "--epsilon",
            "0.5",
            "--s",
            "8",
            "--restarts",
            "4",
            "--seed",
            "7",
            "--output",
            first.to_str().unwrap(),
        ],
    );
    assert!(out.stdout.is_empty());
    let code = out.status.code();
    assert!(code == Some(0) || code == Some(1));
    let out = run(
        dir.path(),
        &[
            "rerun",
            first.to_str().unwrap(),
            "--output",
            second.to_str().unwrap(),
        ],
    );
    assert_eq!(out.status.code(), code);
    let a = std::fs::read(&first).unwrap();
    let b = std::fs::read(&second).unwrap();
    assert_eq!(a, b);

    let mut files: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    files.sort();
    assert_eq!(files, ["first.json", "second.json"]);

    let text = std::str::from_utf8(&a).unwrap();
    let report: Report<CertifyResult> = serde_json::from_str(text).unwrap();
    let again = serde_json::to_string_pretty(&report).unwrap() + "\n";
    assert_eq!(again, text);
}

#[test]
fn closed_form_matches_frame_computation() {
    let dir = tempfile::tempdir().unwrap();
    let mut tensors = Vec::new();
    for source in ["oracle", "closed-form"] {
        let out = run(
            dir.path(),
            &[
                "curvature",
                "--builtin",
                "heis3",
                "--r",
                "3",
                "--s",
                "4",
                "--tensor",
                source,
            ],
        );
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        assert_eq!(v["dim"], 4);
        assert_eq!(v["levels"], serde_json::json!([0, 1, 1, 2]));
        let data: Vec<f64> = serde_json::from_value(v["data"].clone()).unwrap();
        assert_eq!(data.len(), 256);
        tensors.push(data);
    }
    // Components with an odd number of radial indices are not covered by the
    // closed form.
    let radial_count = |i: usize| (0..4).filter(|p| (i >> (2 * p)) & 3 == 0).count();
    let gap = (0..256)
        .filter(|&i| radial_count(i) % 2 == 0)
        .map(|i| (tensors[0][i] - tensors[1][i]).abs())
        .fold(0.0, f64::max);
    assert!(gap < 1e-9, "{gap}");
}

#[test]
fn commutator_and_profile() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["commutator", "--size", "5", "--trials", "50"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["identity_holds"], true);
    let out = run(dir.path(), &["profile", "--builtin", "free2step:3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], true);
}
