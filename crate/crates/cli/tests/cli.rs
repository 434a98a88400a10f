use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_blochspace"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn entries(m: &Value) -> Vec<Vec<(f64, f64)>> {
    m["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|row| {
            row.as_array()
                .unwrap()
                .iter()
                .map(|z| (z[0].as_f64().unwrap(), z[1].as_f64().unwrap()))
                .collect()
        })
        .collect()
}

const MIXED3: &str = r#"{"dim":3,"entries":[[[0.3333333333333333,0],[0,0],[0,0]],[[0,0],[0.3333333333333333,0],[0,0]],[[0,0],[0,0],[0.3333333333333334,0]]]}"#;
const PURE3: &str = r#"{"dim":3,"entries":[[[1,0],[0,0],[0,0]],[[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0]]]}"#;

#[test]
fn basis_single_operator() {
    let out = run(&["basis", "--two-j", "2", "--L", "2", "--M", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let m = entries(&json(&out));
    let c = 1.0 / 6f64.sqrt();
    let diag = [c, -2.0 * c, c];
    for (i, row) in m.iter().enumerate() {
        for (j, &(re, im)) in row.iter().enumerate() {
            let expected = if i == j { diag[i] } else { 0.0 };
            assert!((re - expected).abs() < 1e-15 && im == 0.0);
        }
    }
}

#[test]
fn basis_full_set_and_negative_projection() {
    let out = run(&["basis", "--two-j", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let all = json(&out);
    assert_eq!(all.as_array().unwrap().len(), 4);
    assert_eq!(all[1]["label"]["M"], -1);

    let out = run(&["basis", "--two-j", "1", "--L", "1", "--M", "-1"]);
    assert_eq!(out.status.code(), Some(0));
    // T_{1,-1}(1/2) has its single entry 1 at row 1, column 0
    assert_eq!(entries(&json(&out))[1][0], (1.0, 0.0));
}

#[test]
fn basis_rejects_bad_labels() {
    assert_eq!(run(&["basis", "--two-j", "0"]).status.code(), Some(2));
    assert_eq!(run(&["basis", "--two-j", "1", "--L", "2", "--M", "0"]).status.code(), Some(2));
    assert_eq!(run(&["basis", "--two-j", "1", "--L", "1"]).status.code(), Some(2));
}

#[test]
fn check_exit_codes() {
    let out = run_stdin(&["check", "--input", "-", "--oracle"], MIXED3);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let s: Vec<f64> = report["S"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    for (a, b) in s.iter().zip([1.0, 1.0 / 3.0, 1.0 / 27.0]) {
        assert!((a - b).abs() < 1e-15);
    }
    assert_eq!(report["verdict"], "Positive");

    let y = (2.0f64 / 3.0).sqrt();
    let bloch = format!(r#"{{"two_j":2,"params":[0,0,0,{y:.17},0,0,0,0]}}"#);
    let out = run_stdin(&["check"], &bloch);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["verdict"], "NonPositive");

    let out = run_stdin(&["check", "--oracle"], PURE3);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["verdict"], "Marginal");

    assert_eq!(run_stdin(&["check"], "{\"dim\":2").status.code(), Some(2));
    let not_unit = r#"{"dim":2,"entries":[[[1,0],[0,0]],[[0,0],[1,0]]]}"#;
    assert_eq!(run_stdin(&["check"], not_unit).status.code(), Some(2));
}

#[test]
fn compose_decompose_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let bloch = dir.path().join("v.json");
    let matrix = dir.path().join("rho.json");
    let back = dir.path().join("back.json");
    std::fs::write(&bloch, r#"{"two_j":2,"params":[0.1,0.05,-0.02,0.07,0.01,0.0,-0.03,0.04]}"#).unwrap();

    let out = run(&["compose", "-i", bloch.to_str().unwrap(), "-o", matrix.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["decompose", "-i", matrix.to_str().unwrap(), "-o", back.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&back).unwrap()).unwrap();
    let params: Vec<f64> = v["params"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    for (a, b) in params.iter().zip([0.1, 0.05, -0.02, 0.07, 0.01, 0.0, -0.03, 0.04]) {
        assert!((a - b).abs() < 1e-15);
    }

    assert_eq!(run(&["compose", "-i", matrix.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["decompose", "-i", "/nonexistent/file.json"]).status.code(), Some(2));
}

#[test]
fn traces_of_maximally_mixed() {
    let out = run_stdin(&["traces", "--kmax", "4"], MIXED3);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let traces: Vec<f64> = v["traces"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    for (k, t) in traces.iter().enumerate() {
        assert!((t - 3f64.powi(1 - k as i32)).abs() < 1e-15);
    }
}

#[test]
fn scan_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let csv_a = dir.path().join("a.csv");
    let csv_b = dir.path().join("b.csv");
    let json_a = dir.path().join("a.json");
    let json_b = dir.path().join("b.json");
    let args = |csv: &std::path::Path, js: &std::path::Path| {
        vec![
            "scan".to_string(),
            "--type".into(),
            "VI".into(),
            "--resolution".into(),
            "61".into(),
            "-o".into(),
            csv.to_str().unwrap().into(),
            "--boundary".into(),
            js.to_str().unwrap().into(),
        ]
    };
    let out = bin().args(args(&csv_a, &json_a)).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = bin()
        .args(args(&csv_b, &json_b))
        .env("BLOCHSPACE_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read(&csv_a).unwrap(), std::fs::read(&csv_b).unwrap());
    assert_eq!(std::fs::read(&json_a).unwrap(), std::fs::read(&json_b).unwrap());

    let csv = std::fs::read_to_string(&csv_a).unwrap();
    assert_eq!(csv.lines().next(), Some("s,t,norm_sq,F,class"));
    assert_eq!(csv.lines().count(), 61 * 61 + 1);

    let boundary: Value = serde_json::from_str(&std::fs::read_to_string(&json_a).unwrap()).unwrap();
    assert_eq!(boundary["section"]["type"], "VI");
    for line in boundary["boundary"].as_array().unwrap() {
        for p in line.as_array().unwrap() {
            let (s, t) = (p[0].as_f64().unwrap(), p[1].as_f64().unwrap());
            assert!(((s * s + t * t).sqrt() - 1.0 / 3.0).abs() < 2.0 / 60.0);
        }
    }
}

#[test]
fn scan_by_pair_to_stdout() {
    let out = run(&["scan", "--pair", "x,y", "--resolution", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 26);
}

#[test]
fn scan_rejects_bad_sections() {
    assert_eq!(run(&["scan", "--pair", "q,z"]).status.code(), Some(2));
    assert_eq!(run(&["scan", "--type", "VIII"]).status.code(), Some(2));
    assert_eq!(run(&["scan"]).status.code(), Some(2));
    assert_eq!(run(&["scan", "--type", "I", "--resolution", "2"]).status.code(), Some(2));
    let out = bin()
        .args(["scan", "--type", "I", "--resolution", "5"])
        .env("BLOCHSPACE_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_suites() {
    let out = run(&["verify", "--two-j-max", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| l.starts_with("PASS")));

    let out = run(&["verify", "--two-j-max", "1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let summary = json(&out);
    assert_eq!(summary["passed"], true);
    assert!(summary["suites"]
        .as_array()
        .unwrap()
        .iter()
        .any(|s| s["suite"] == "fixtures" && s["passed"] == true));

    let out = run(&["verify", "--two-j-max", "99"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("2j_max"));
}
