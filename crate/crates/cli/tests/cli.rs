use std::process::{Command, Output};

use serde_json::Value;

fn mst(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mst"))
        .args(args)
        .env_remove("MST_TOL")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn entry(m: &Value, i: usize, j: usize) -> (f64, f64) {
    let e = &m["entries"][i][j];
    (e[0].as_f64().unwrap(), e[1].as_f64().unwrap())
}

fn assert_matrix(m: &Value, want: &[[f64; 2]; 2], tol: f64) {
    for i in 0..2 {
        for j in 0..2 {
            let (re, im) = entry(m, i, j);
            assert!(
                (re - want[i][j]).abs() < tol && im.abs() < tol,
                "({i},{j}) = {re}+{im}i"
            );
        }
    }
}

#[test]
fn tto_lower_triangular_toeplitz() {
    let out = mst(&[
        "tto",
        "--space",
        "z^2",
        "--symbol",
        "(1+z^2)/((1-z/2)(1-z/3))",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_matrix(&json(&out), &[[1.0, 0.0], [5.0 / 6.0, 1.0]], 1e-12);
}

#[test]
fn equiv_middle_factor() {
    let out = mst(&[
        "equiv",
        "--theta",
        "blaschke(0.5, 1/3)",
        "--symbol",
        "(z-1/2)(z-1/3)(z^2+1)/z^2",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc = json(&out);
    assert_matrix(&doc["middle"], &[[1.0, 0.0], [5.0 / 6.0, 1.0]], 1e-10);
    assert_eq!(doc["checks"][0]["passed"], Value::Bool(true));
}

#[test]
fn dual_kernel_of_equal_spaces() {
    let out = mst(&["dual-kernel", "--theta", "z^2", "--alpha", "z^2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc = json(&out);
    assert_eq!(doc["dim"], 1);
    assert_eq!(doc["k"], 0);
}

#[test]
fn verify_all_passes_and_zero_tolerance_fails() {
    let out = mst(&["verify", "--suite", "all"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(json(&out)["passed"], Value::Bool(true));

    let out = mst(&["verify", "--suite", "rational", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("residual"));
}

#[test]
fn tolerance_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_mst"))
        .args(["verify", "--suite", "blaschke"])
        .env("MST_TOL", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_json_reports_position() {
    let out = mst(&["tto", "--space", "{\"zeros\": [[0.5, 0],}", "--symbol", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("line 1") && err.contains("column 21"), "{err}");
}

#[test]
fn unknown_field_rejected() {
    let out = mst(&["tto", "--space", "{\"zerox\": []}", "--symbol", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("zerox"));
}

#[test]
fn bad_shorthand_reports_position() {
    let out = mst(&["tto", "--space", "z^2", "--symbol", "(1+z"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("position"));
}

#[test]
fn unequal_ranks_exit_two() {
    let a = "[[[1,0],[0,0]],[[0,0],[0,0]]]";
    let b = "[[[1,0],[0,0]],[[0,0],[1,0]]]";
    let out = mst(&["rank-equiv", "--a", a, "--b", b]);
    assert_eq!(out.status.code(), Some(2));
    let doc = json(&out);
    assert_eq!(doc["rank_a"], 1);
    assert_eq!(doc["rank_b"], 2);
}

#[test]
fn rank_equivalence_found() {
    let a = "[[[1,0],[2,0]],[[2,0],[4,0]]]";
    let b = "[[[0,0],[0,0]],[[0,0],[3,1]]]";
    let out = mst(&["rank-equiv", "--a", a, "--b", b]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn non_invertible_wh_exit_two() {
    let out = mst(&["wh-inverse", "--n", "2", "--symbol", "z^3"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["invertible"], Value::Bool(false));

    let out = mst(&["wh-inverse", "--n", "3", "--symbol", "2 + 0.5z + 0.3/z"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn crofoot_and_conjugation() {
    let out = mst(&[
        "crofoot",
        "--space",
        "blaschke(0.5, 0.2i)",
        "--w",
        "0.3-0.1i",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let out = mst(&[
        "conjugation-check",
        "--space",
        "blaschke(0.4, -0.3)",
        "--symbol",
        "z + 2/z",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.csv");
    let out = mst(&[
        "tto",
        "--space",
        "z^2",
        "--symbol",
        "1+z",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let mut rdr = csv::Reader::from_path(&path).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["row", "col", "re", "im"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(&rows[2][2].parse::<f64>().unwrap(), &1.0);
}

#[test]
fn problem_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    std::fs::write(
        &path,
        r#"{"space": {"zeros": [[0, 0], [0, 0]]}, "symbol": "1+z", "options": {"format": "csv"}}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let out = mst(&["tto", "--problem", p]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("row,col,re,im"));

    let out = mst(&[
        "tto",
        "--problem",
        p,
        "--format",
        "json",
        "--symbol",
        "(1+z^2)/((1-z/2)(1-z/3))",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_matrix(&json(&out), &[[1.0, 0.0], [5.0 / 6.0, 1.0]], 1e-12);

    std::fs::write(&path, "{\"space\": \"z^2\",\n \"bogus\": 1}").unwrap();
    let out = mst(&["tto", "--problem", p]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));
}

#[test]
fn emitted_matrix_feeds_back_in() {
    let out = mst(&[
        "tto",
        "--space",
        "blaschke(0.5, 0.3i)",
        "--symbol",
        "1 + 0.25z + 0.1/z",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let first = json(&out);
    let text = serde_json::to_string(&first).unwrap();
    assert_eq!(serde_json::from_str::<Value>(&text).unwrap(), first);

    // The emitted operator matrix is accepted as matrix input and is
    // rank-equivalent to itself.
    let m = serde_json::json!({
        "rows": first["rows"], "cols": first["cols"], "entries": first["entries"]
    })
    .to_string();
    let out = mst(&["rank-equiv", "--a", &m, "--b", &m]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(mst(&["--help"]).status.code(), Some(0));
    assert_eq!(mst(&["--version"]).status.code(), Some(0));
    assert_eq!(mst(&["no-such-command"]).status.code(), Some(1));
}
