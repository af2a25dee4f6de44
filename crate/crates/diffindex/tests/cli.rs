//! End-to-end tests of the binary: flags, exit codes, and the structured
//! output schema.

use std::path::PathBuf;
use std::process::{Command, Output};

fn testdata(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("testdata")
        .join(name)
}

fn diffindex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diffindex"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON document")
}

#[test]
fn index_json_schema_and_values() {
    let golden = testdata("golden.sys");
    let out = diffindex(&[
        "index",
        "--system",
        golden.to_str().unwrap(),
        "--format",
        "json",
        "--assume-quasi-regular",
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = stdout_json(&out);
    assert_eq!(v["version"], 1);
    assert_eq!(v["mu"], serde_json::json!([0, 1, 2, 2]));
    assert_eq!(v["omega"], 2);
    assert_eq!(v["order"], 1);
    assert_eq!(v["jacobi_number"], 2);
    assert_eq!(v["jacobi_bound"], 3);
    assert_eq!(v["bound_holds"], true);
    assert!(v["regularity_table"].is_array());
    assert_eq!(v["regularity_table"][0]["trdeg"], 1);
}

#[test]
fn json_like_format_is_accepted() {
    let golden = testdata("golden.sys");
    let out = diffindex(&[
        "order",
        "--system",
        golden.to_str().unwrap(),
        "--format",
        "json-like",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["order"], 1);
}

#[test]
fn member_cofactors_round_trip_through_the_parser() {
    let golden = testdata("golden.sys");
    let out = diffindex(&[
        "member",
        "--system",
        golden.to_str().unwrap(),
        "--poly",
        "y3 - 1",
        "--format",
        "json",
        "--assume-quasi-regular",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let query = &v["queries"][0];
    assert_eq!(query["n"], 1);
    assert_eq!(query["member"], true);

    // re-parse every printed cofactor and re-expand the certificate exactly
    let source = std::fs::read_to_string(&golden).unwrap();
    let file = diffindex::parser::parse_system_file(&source).unwrap();
    let sys = file.system().unwrap();
    let mut acc = diffindex::poly::Polynomial::zero();
    for entry in query["cofactors"].as_array().unwrap() {
        let i = entry["i"].as_u64().unwrap() as usize;
        let j = entry["j"].as_u64().unwrap() as u32;
        let g = diffindex::parser::parse_polynomial(entry["g"].as_str().unwrap(), &file.var_names)
            .expect("cofactor strings re-parse");
        acc = &acc + &(&g * &sys.equation(i - 1).transform(j));
    }
    let expected = diffindex::parser::parse_polynomial("y3 - 1", &file.var_names).unwrap();
    assert_eq!(
        acc, expected,
        "printed certificate expands back to the query"
    );
}

#[test]
fn member_uses_file_queries_when_no_poly_given() {
    let golden = testdata("golden.sys");
    let out = diffindex(&[
        "member",
        "--system",
        golden.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let queries = v["queries"].as_array().unwrap();
    assert_eq!(queries.len(), 2);
    assert_eq!(queries[0]["member"], true); // q1: y3 - 1
    assert_eq!(queries[1]["member"], false); // q2: y1
}

#[test]
fn mu_table_honors_kmax() {
    let golden = testdata("golden.sys");
    let out = diffindex(&[
        "mu",
        "--system",
        golden.to_str().unwrap(),
        "--kmax",
        "4",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[3]["mu"], 2); // still stationary past omega
}

#[test]
fn jacobi_subcommand_prints_the_witness() {
    let golden = testdata("golden.sys");
    let out = diffindex(&["jacobi", "--system", golden.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("jacobi_number: 2"), "got: {text}");
    assert!(text.contains("f1 -> y1"), "got: {text}");
    assert!(text.contains("jacobi_bound: 3"), "got: {text}");
}

#[test]
fn regularity_subcommand_tabulates_phi() {
    let two_step = testdata("two_step.sys");
    let out = diffindex(&[
        "regularity",
        "--system",
        two_step.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let rows = v["regularity_table"].as_array().unwrap();
    assert_eq!(rows[0]["matches"], false); // below e-1 the polynomial overshoots
    assert_eq!(rows[1]["matches"], true);
    assert_eq!(v["regularity_bound"], 1);
    assert_eq!(v["observed_regularity"], 1);
}

#[test]
fn check_reports_verification() {
    let golden = testdata("golden.sys");
    let out = diffindex(&["check", "--system", golden.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("verified up to k = 4"), "got: {text}");
}

#[test]
fn example_subcommand_matches_stored_report() {
    let out = diffindex(&["example"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("matches the stored golden output"));
}

#[test]
fn inconsistent_system_is_an_analysis_failure() {
    let path = testdata("inconsistent.sys");
    let out = diffindex(&["index", "--system", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("unit ideal"), "got: {err}");
}

#[test]
fn rank_deficient_system_fails_the_check() {
    let path = testdata("degenerate.sys");
    let out = diffindex(&["check", "--system", path.to_str().unwrap(), "--kmax", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("FAILS at k = 1"), "got: {text}");
    assert!(text.contains("RANK DEFICIENT"), "got: {text}");
}

#[test]
fn parse_errors_exit_with_usage_code() {
    let bad = testdata("bad.sys");
    let out = diffindex(&["index", "--system", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("undeclared variable"), "got: {err}");

    let out = diffindex(&["index", "--system", "/nonexistent/file.sys"]);
    assert_eq!(out.status.code(), Some(2));

    let out = diffindex(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_member_query_is_a_usage_error() {
    let golden = testdata("golden.sys");
    let out = diffindex(&[
        "member",
        "--system",
        golden.to_str().unwrap(),
        "--poly",
        "y1 +* 2",
    ]);
    assert_eq!(out.status.code(), Some(2));

    // undeclared variable in the query
    let out = diffindex(&[
        "member",
        "--system",
        golden.to_str().unwrap(),
        "--poly",
        "w - 1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn index_override_below_minimum_is_a_usage_error() {
    let two_step = testdata("two_step.sys");
    let out = diffindex(&["mu", "--system", two_step.to_str().unwrap(), "--i", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("at least e - 1"), "got: {err}");
}

#[test]
fn index_override_at_e_reproduces_the_profile() {
    let golden = testdata("golden.sys");
    let out = diffindex(&[
        "index",
        "--system",
        golden.to_str().unwrap(),
        "--i",
        "1",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["mu"], serde_json::json!([0, 1, 2, 2]));
    assert_eq!(v["omega"], 2);
}

#[test]
fn conditional_labeling_without_the_assumption_flag() {
    let shift = testdata("shift.sys");
    let out = diffindex(&["index", "--system", shift.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("conditional"), "got: {text}");

    let out = diffindex(&[
        "index",
        "--system",
        shift.to_str().unwrap(),
        "--assume-quasi-regular",
    ]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("asserted"), "got: {text}");
}
