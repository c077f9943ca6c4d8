//! End-to-end tests against the built binary: output contracts and exit codes.

use std::process::{Command, Output};

use cyclowed_core::absolute::{AbsoluteTuple, CompositeTuple};

fn cyclowed(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclowed"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn eldiv_dedekind_worked_example() {
    let out = cyclowed(&["eldiv", "dedekind", "--p", "3", "--n", "2", "--oracle"]);
    assert!(out.status.success());
    let s = stdout(&out);
    assert!(s.contains("[0, 1, 4, 5, 8, 9]"), "{}", s);
    assert!(s.contains("AGREE"), "{}", s);
}

#[test]
fn radical_series_worked_example() {
    let out = cyclowed(&["radical-series", "--p", "3", "--n", "4", "--max-i", "9"]);
    assert!(out.status.success());
    assert!(
        stdout(&out).contains("1, 5, 15, 31, 50, 66, 76, 80, 81, 81"),
        "{}",
        stdout(&out)
    );
    let out = cyclowed(&["radical-series", "--p", "3", "--n", "2", "--max-i", "7", "--lambda"]);
    assert!(stdout(&out).contains("1, 2, 3, 4, 5, 6, 6, 6"), "{}", stdout(&out));
}

#[test]
fn index_of_one_is_one() {
    let out = cyclowed(&["index", "--m", "1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains(": 1"), "{}", stdout(&out));
}

#[test]
fn json_mode_emits_command_result() {
    let out = cyclowed(&["--json", "eldiv", "dedekind", "--p", "3", "--n", "2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["status"], "ok");
    assert_eq!(v["payload"]["closed_form"], serde_json::json!([0, 1, 4, 5, 8, 9]));
    assert_eq!(v["payload"]["determinant_valuation"], serde_json::json!(27));
    assert!(v["timing_ms"].is_u64());
}

#[test]
fn ties_absolute_renders_congruences() {
    let out = cyclowed(&["ties", "absolute", "--p", "3", "--n", "2"]);
    assert!(out.status.success());
    let s = stdout(&out);
    assert!(s.contains("x_{1,0} =_3 (x_{2,0} - x_{2,2} + x_{2,3} - x_{2,5})"), "{}", s);
    assert!(s.contains("x_{0,0} =_9 3(x_{2,2} + x_{2,5}) + (x_{1,0} + x_{1,1})"), "{}", s);
}

#[test]
fn check_absolute_member_and_violation_exit_codes() {
    let dir = std::env::temp_dir();
    let member_path = dir.join("cyclowed_member.json");
    let t = AbsoluteTuple::generator_image(3, 2, 5).unwrap();
    std::fs::write(&member_path, t.to_json().to_string()).unwrap();
    let out = cyclowed(&["check", "absolute", "--input", member_path.to_str().unwrap(), "--oracle"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("MEMBER"));

    // break one coordinate
    let mut v = t.to_json();
    v["components"][0]["coeffs"]["0"] = serde_json::json!("1");
    let bad_path = dir.join("cyclowed_nonmember.json");
    std::fs::write(&bad_path, v.to_string()).unwrap();
    let out = cyclowed(&["check", "absolute", "--input", bad_path.to_str().unwrap(), "--oracle"]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    assert!(stdout(&out).contains("NOT a member"));
    assert!(stdout(&out).contains("agrees"));
}

#[test]
fn check_composite_generator_image() {
    let dir = std::env::temp_dir();
    let path = dir.join("cyclowed_composite.json");
    let t = CompositeTuple::generator_image(12, 7);
    std::fs::write(&path, t.to_json().to_string()).unwrap();
    let out = cyclowed(&["check", "composite", "--m", "12", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let s = stdout(&out);
    assert!(s.contains("MEMBER"), "{}", s);
    // seven delegated checks
    assert_eq!(s.matches(": pass").count(), 7, "{}", s);
}

#[test]
fn usage_errors_exit_2() {
    let out = cyclowed(&["eldiv", "dedekind", "--p", "4", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = cyclowed(&["eldiv", "dedekind", "--p", "3", "--n", "9"]);
    assert_eq!(out.status.code(), Some(2));
    let out = cyclowed(&["nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    let out = cyclowed(&["check", "absolute", "--input", "/nonexistent.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ceiling_override_via_env() {
    let out = Command::new(env!("CARGO_BIN_EXE_cyclowed"))
        .args(["eldiv", "dedekind", "--p", "3", "--n", "2"])
        .env("CYCLOWED_MAX_DEGREE", "8")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_cyclowed"))
        .args(["eldiv", "dedekind", "--p", "2", "--n", "3"])
        .env("CYCLOWED_MAX_DEGREE", "8")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_is_seed_reproducible() {
    let run = || {
        let out = cyclowed(&["verify", "--suite", "vandermonde", "--trials", "3", "--seed", "11"]);
        assert!(out.status.success());
        stdout(&out)
    };
    let a = run();
    assert!(a.contains("vandermonde: 21/21 passed"), "{}", a);
    assert_eq!(a, run());
}

#[test]
fn basis_json_has_expected_first_row() {
    let out = cyclowed(&["--json", "basis", "wedderburn", "--m", "5"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let basis = &v["payload"]["basis"];
    assert_eq!(basis["rows"], serde_json::json!(5));
    assert_eq!(basis["domain"]["cyclotomic"], serde_json::json!(5));
    assert_eq!(
        basis["entries"][0][0],
        serde_json::json!(["5", "0", "0", "0"])
    );
}

#[test]
fn hochschild_table_output() {
    let out = cyclowed(&["hochschild", "--p", "3", "--n", "2", "--twist", "1", "--max-degree", "3"]);
    assert!(out.status.success());
    let s = stdout(&out);
    assert!(s.contains("degree 0: T"), "{}", s);
    assert!(s.contains("degree 1: T/t^9T"), "{}", s);
    assert!(s.contains("degree 2: 0"), "{}", s);
    let out = cyclowed(&[
        "hochschild", "--p", "3", "--n", "2", "--twist", "4", "--max-degree", "1", "--cohomology",
    ]);
    let s = stdout(&out);
    assert!(s.contains("degree 0: 0"), "{}", s);
    assert!(s.contains("degree 1: T/t^3T"), "{}", s);
}

#[test]
fn experiment_reports_evidence() {
    let out = cyclowed(&["experiment", "w2-subring", "--p", "2", "--n", "2"]);
    assert!(out.status.success(), "{}", stdout(&out));
    let s = stdout(&out);
    assert!(s.contains("pairs tested"), "{}", s);
    assert!(s.contains("evidence for closure"), "{}", s);
}
