//! End-to-end tests of the `rbterm` binary: flag parsing, output bytes,
//! exit codes, and determinism across runs and job counts.

use std::process::{Command, Output};

fn rbterm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rbterm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn expand_worked_example_json() {
    let out = rbterm(&["expand", "--a", "2", "--b", "1", "--c", "0", "--format", "json"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out).trim_end(),
        concat!(
            "[{\"tree\":[0,0,2],\"coeff\":[[1,\"1\"]]},",
            "{\"tree\":[0,1,2],\"coeff\":[[0,\"1\"]]},",
            "{\"tree\":[1,0,1],\"coeff\":[[1,\"1\"]]},",
            "{\"tree\":[1,0,2],\"coeff\":[[0,\"1\"]]},",
            "{\"tree\":[2,0,1],\"coeff\":[[0,\"1\"]]}]"
        )
    );
}

#[test]
fn expand_already_normal_is_itself() {
    let out = rbterm(&["expand", "--a", "0", "--b", "3", "--c", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim_end(), "T(0,3,1)");
}

#[test]
fn naive_and_memoized_expansion_bytes_agree() {
    let fast = rbterm(&["expand", "--a", "3", "--b", "3", "--c", "0", "--format", "json"]);
    let slow = rbterm(&[
        "expand", "--a", "3", "--b", "3", "--c", "0", "--naive", "--format", "json",
    ]);
    assert!(fast.status.success() && slow.status.success());
    assert_eq!(fast.stdout, slow.stdout);
}

#[test]
fn closed_form_examples() {
    let out = rbterm(&["closed-form", "--a", "2", "--b", "1", "--restricted"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim_end(), "T(0,1,2) + T(1,0,2) + T(2,0,1)");

    let out = rbterm(&["closed-form", "--a", "1", "--b", "1"]);
    assert_eq!(
        stdout(&out).trim_end(),
        "λ T(0,0,1) + T(0,1,1) + T(1,0,1)"
    );

    // the published variant diverges from the oracle at T(0,1,2)
    let published = rbterm(&[
        "closed-form", "--a", "2", "--b", "2", "--mode", "as-published", "--format", "json",
    ]);
    let oracle = rbterm(&["expand", "--a", "2", "--b", "2", "--format", "json"]);
    assert_ne!(published.stdout, oracle.stdout);
    let reconciled = rbterm(&["closed-form", "--a", "2", "--b", "2", "--format", "json"]);
    assert_eq!(reconciled.stdout, oracle.stdout);
}

#[test]
fn usage_errors_exit_2() {
    let out = rbterm(&["closed-form", "--a", "0", "--b", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = rbterm(&["expand", "--a", "-1", "--b", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = rbterm(&["closed-form", "--a", "1", "--b", "1", "--mode", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn caps_exit_3() {
    let out = rbterm(&["expand", "--a", "8", "--b", "8", "--naive"]);
    assert_eq!(out.status.code(), Some(3));
    let out = rbterm(&["expand", "--a", "3", "--b", "3", "--max-terms", "4"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_restricted_passes() {
    let out = rbterm(&["verify", "--max-a", "6", "--max-b", "6", "--restricted"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_reconciled_passes() {
    let out = rbterm(&["verify", "--max-a", "5", "--max-b", "5", "--mode", "reconciled"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_as_published_fails_in_the_c2_sums() {
    let out = rbterm(&[
        "verify", "--max-a", "4", "--max-b", "4", "--mode", "as-published", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(stdout(&out).trim_end()).unwrap();
    let mismatches = report["mismatches"].as_array().unwrap();
    assert!(!mismatches.is_empty());
    for m in mismatches {
        let sum = m["sum"].as_str().unwrap();
        assert!(sum == "D2" || sum == "D3", "unexpected sum {sum}");
    }
}

#[test]
fn verify_json_is_deterministic_across_jobs() {
    let single = rbterm(&[
        "verify", "--max-a", "4", "--max-b", "4", "--mode", "as-published", "--format", "json",
    ]);
    let multi = rbterm(&[
        "verify", "--max-a", "4", "--max-b", "4", "--mode", "as-published", "--format", "json",
        "--jobs", "4",
    ]);
    let again = rbterm(&[
        "verify", "--max-a", "4", "--max-b", "4", "--mode", "as-published", "--format", "json",
    ]);
    assert_eq!(single.stdout, multi.stdout);
    assert_eq!(single.stdout, again.stdout);
}

#[test]
fn model_checks_pass_for_the_oracle() {
    for model in ["integral", "sum"] {
        let out = rbterm(&[
            "model-check", "--model", model, "--max-a", "3", "--max-b", "3", "--trials", "2",
            "--seed", "42",
        ]);
        assert_eq!(out.status.code(), Some(0), "model {model}");
    }
}

#[test]
fn model_check_flags_the_published_variant() {
    let out = rbterm(&[
        "model-check", "--model", "sum", "--max-a", "2", "--max-b", "2", "--mode",
        "as-published",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn model_check_json_is_deterministic_across_jobs() {
    let args = [
        "model-check", "--model", "sum", "--max-a", "3", "--max-b", "3", "--seed", "7",
        "--format", "json",
    ];
    let single = rbterm(&args);
    let multi = rbterm(&[&args[..], &["--jobs", "3"]].concat());
    assert_eq!(single.stdout, multi.stdout);
}

#[test]
fn count_flags_only_the_printed_closed_form() {
    let out = rbterm(&["count", "--max-a", "4", "--max-m", "4", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "disagreement is a finding, not a failure");
    let report: serde_json::Value = serde_json::from_str(stdout(&out).trim_end()).unwrap();
    let rows = report["rows"].as_array().unwrap();
    let two_two = rows
        .iter()
        .find(|r| r["a"] == 2 && r["m"] == 2)
        .expect("row (2,2)");
    assert_eq!(two_two["enumeration"], "3");
    assert_eq!(two_two["closed_form"], "5");
    assert_eq!(two_two["enumeration_eq_closed"], false);
    assert!(rows
        .iter()
        .all(|r| r["enumeration_eq_prefix"].as_bool().unwrap()));
    assert!(rows
        .iter()
        .filter(|r| r["a"] == 1)
        .all(|r| r["enumeration_eq_closed"].as_bool().unwrap()));
}

#[test]
fn emit_latex_operator_notation() {
    let out = rbterm(&["emit-latex", "--a", "1", "--b", "1", "--operator-notation"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out).trim_end(),
        "P(x)P(y) = \\lambda P(xy) + P(xP(y)) + P(P(x)y)"
    );
    let sym = rbterm(&["emit-latex", "--a", "1", "--b", "1"]);
    assert_eq!(
        stdout(&sym).trim_end(),
        "T(1,1,0) = \\lambda T(0,0,1) + T(0,1,1) + T(1,0,1)"
    );
}

#[test]
fn bench_caps_the_naive_column() {
    let out = rbterm(&["bench", "--max-ab", "8", "--format", "json"]);
    assert!(out.status.success());
    let rows: serde_json::Value = serde_json::from_str(stdout(&out).trim_end()).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 8);
    for row in rows {
        let ab = row["ab"].as_u64().unwrap();
        assert!(row["agree"].as_bool().unwrap());
        if ab <= 7 {
            assert!(row["naive_ms"].is_number(), "naive present at {ab}");
            assert!(row["naive_events"].is_number());
        } else {
            assert!(row["naive_ms"].is_null(), "naive absent past the cap");
        }
    }
    // all three methods agree on the three-term identity at a=b=1
    assert_eq!(rows[0]["terms"], 3);
}

#[test]
fn output_flag_writes_the_same_bytes() {
    let dir = std::env::temp_dir().join("rbterm-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("expand.json");
    let piped = rbterm(&["expand", "--a", "2", "--b", "2", "--format", "json"]);
    let to_file = rbterm(&[
        "expand", "--a", "2", "--b", "2", "--format", "json", "--output",
        path.to_str().unwrap(),
    ]);
    assert!(to_file.status.success());
    assert!(to_file.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), piped.stdout);
}
