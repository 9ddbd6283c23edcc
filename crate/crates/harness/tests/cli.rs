use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use knotfit_harness::output::TABLE_HEADER;
use knotfit_harness::ResultsTable;

fn knotfit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_knotfit"))
        .args(args)
        .output()
        .unwrap()
}

fn fit_args<'a>(dir: &'a Path, extra: &[&'a str]) -> Vec<String> {
    let mut args: Vec<String> = extra.iter().map(|s| s.to_string()).collect();
    for (flag, name) in [
        ("--out-table", "t.csv"),
        ("--out-svg", "plot.svg"),
        ("--out-curve", "curve.json"),
    ] {
        args.push(flag.into());
        args.push(dir.join(name).to_str().unwrap().into());
    }
    args
}

fn run(args: &[String]) -> Output {
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    knotfit(&refs)
}

#[test]
fn generate_writes_csv_to_stdout() {
    let out = knotfit(&["generate", "--curve", "vivaldi", "--samples", "5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,y,z");
    assert_eq!(lines.len(), 6);
}

#[test]
fn fit_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let args = fit_args(
        dir.path(),
        &[
            "fit",
            "--curve",
            "spiral",
            "--method",
            "both",
            "--iterations",
            "3,6",
            "--locations",
            "8",
        ],
    );
    let out = run(&args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(dir.path().join("t.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), TABLE_HEADER);
    assert_eq!(csv.lines().count(), 5);
    let json: ResultsTable =
        serde_json::from_str(&fs::read_to_string(dir.path().join("t.json")).unwrap()).unwrap();
    assert_eq!(json.rows.len(), 4);
    let svg = fs::read_to_string(dir.path().join("plot.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("<polyline"));
    let curve: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("curve.json")).unwrap()).unwrap();
    assert_eq!(curve["degree"], 3);
    assert!(curve["knots"].is_array() && curve["control_points"].is_array());
}

#[test]
fn usage_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(knotfit(&["fit"]).status.code(), Some(2));
    let descending = fit_args(
        dir.path(),
        &["fit", "--curve", "spiral", "--iterations", "10,5"],
    );
    assert_eq!(run(&descending).status.code(), Some(2));
    let bad_pp = fit_args(
        dir.path(),
        &[
            "fit",
            "--curve",
            "spiral",
            "--iterations",
            "5",
            "--pp1",
            "1.5",
        ],
    );
    assert_eq!(run(&bad_pp).status.code(), Some(2));
}

#[test]
fn malformed_csv_exits_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.csv");
    fs::write(&input, "x,y\n0,0\n1,oops\n2,1\n").unwrap();
    let args = fit_args(
        dir.path(),
        &[
            "fit",
            "--curve",
            "csv",
            "--csv",
            input.to_str().unwrap(),
            "--iterations",
            "5",
        ],
    );
    let out = run(&args);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn too_few_points_for_any_cubic_exits_with_4() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("three.csv");
    fs::write(&input, "0,0\n1,1\n2,0\n").unwrap();
    let args = fit_args(
        dir.path(),
        &[
            "fit",
            "--curve",
            "csv",
            "--csv",
            input.to_str().unwrap(),
            "--iterations",
            "3",
            "--locations",
            "4",
        ],
    );
    let out = run(&args);
    assert_eq!(
        out.status.code(),
        Some(4),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let json: ResultsTable =
        serde_json::from_str(&fs::read_to_string(dir.path().join("t.json")).unwrap()).unwrap();
    assert!(json.rows.iter().all(|r| r.cost.is_none()));
}
