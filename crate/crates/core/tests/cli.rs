use std::io::Write as _;
use std::process::Command;

use lenard::cli::{parse_spec, run, run_suite, RunConfig, Suite};
use lenard::hverify::{check_frobenius, lenard_frame, multiplication_from_chain};
use serde_json::Value;

const Z3: &str = "\
# cyclic group algebra in the chain basis
dim 3
coords A B C
X = (0, 0, 1)
theta = (1, 0, 0)
K1 = [[0, 1, 0],
      [0, 0, 1],
      [1, 0, 0]]
";

const ANTIDIAGONAL: &str = "g = [[0, 0, 1], [0, 1, 0], [1, 0, 0]]\n";

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn lenard(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        std::iter::once("lenard").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn spec_file(body: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(body.as_bytes()).unwrap();
    f
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).expect("report is valid json")
}

#[test]
fn pipeline_on_cubic_solution_passes_every_axiom() {
    let o = lenard(&["pipeline", "--potential", "A^2*B/2", "--report", "json"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json(&o.stdout);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["passed"], true);
    let axioms = v["reports"][0]["axioms"].as_array().unwrap();
    assert!(!axioms.is_empty());
    assert!(axioms.iter().all(|a| a["passed"] == true));
    let data: Vec<(&str, &str)> = v["data"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| (d["name"].as_str().unwrap(), d["value"].as_str().unwrap()))
        .collect();
    assert!(data.contains(&("P", "C")));
    assert!(data.contains(&("Q", "A")));
    assert!(data.contains(&("R", "B")));
}

#[test]
fn wdvv_failure_reports_witness() {
    let o = lenard(&["wdvv", "--potential", "A^3/6", "--report", "json"]);
    assert_eq!(o.code, 1);
    let v = json(&o.stdout);
    assert_eq!(v["passed"], false);
    assert_eq!(v["reports"][0]["axioms"][0]["witness"]["expr"], "1");

    let text = lenard(&["wdvv", "--potential", "A^3/6"]);
    assert_eq!(text.code, 1);
    assert!(text.stdout.contains("FAIL"));
}

#[test]
fn potential_may_come_from_a_file() {
    let f = spec_file("dim 3\ncoords A B C\nF = A^2*B/2 + A*B\n");
    let o = lenard(&["wdvv", "--potential", f.path().to_str().unwrap()]);
    assert_eq!(o.code, 0, "{}", o.stderr);
}

#[test]
fn hm_beyond_the_given_chain_is_a_usage_error() {
    let f = spec_file(Z3);
    let path = f.path().to_str().unwrap();
    let o = lenard(&["check", "--spec", path, "--suite", "hm", "--m", "2"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.starts_with("error:"));
    assert!(o.stdout.is_empty());

    let o = lenard(&["check", "--spec", path, "--suite", "hm"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("--m"));

    let o = lenard(&["check", "--spec", path, "--suite", "hm", "--m", "1"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
}

#[test]
fn frobenius_needs_a_metric() {
    let f = spec_file(Z3);
    let o = lenard(&[
        "check",
        "--spec",
        f.path().to_str().unwrap(),
        "--suite",
        "frobenius",
    ]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("metric"));
}

#[test]
fn frobenius_report_agrees_with_library() {
    let body = format!("{Z3}{ANTIDIAGONAL}");
    let spec = parse_spec(&body, None).unwrap();
    let ms = spec.manifold.as_ref().unwrap();
    let mult = multiplication_from_chain(&lenard_frame(ms), &ms.ks()[0]).unwrap();
    let direct = check_frobenius(ms.metric().unwrap(), &mult.c, ms.x()).unwrap();

    let f = spec_file(&body);
    let o = lenard(&[
        "check",
        "--spec",
        f.path().to_str().unwrap(),
        "--suite",
        "frobenius",
        "--report",
        "json",
    ]);
    assert_eq!(o.code, if direct.passed() { 0 } else { 1 });
    let v = json(&o.stdout);
    let axioms = v["reports"][0]["axioms"].as_array().unwrap();
    assert_eq!(axioms.len(), direct.axioms.len());
    for (a, d) in axioms.iter().zip(&direct.axioms) {
        assert_eq!(a["label"], d.label.as_str());
        assert_eq!(a["passed"], d.passed());
    }
}

#[test]
fn f_and_h1_suites_on_the_cyclic_example() {
    let f = spec_file(Z3);
    let path = f.path().to_str().unwrap();
    for suite in ["h1", "f"] {
        let o = lenard(&["check", "--spec", path, "--suite", suite]);
        assert_eq!(o.code, 0, "{suite}: {}", o.stdout);
        assert!(!o.stdout.contains("FAIL"));
    }
}

#[test]
fn failing_h1_points_at_the_component() {
    // K theta = A dB is not closed
    let body = "dim 2\ncoords A B\nX = (1, 0)\ntheta = (1, 0)\nK1 = [[0, A], [0, 0]]\n";
    let spec = parse_spec(body, None).unwrap();
    let r = run_suite(&spec, &RunConfig::new(Suite::H1)).unwrap();
    assert_eq!(r.exit_code(), 1);
    let failed: Vec<_> = r.checks[0].failures().map(|e| e.label.as_str()).collect();
    assert!(failed.contains(&"d(K theta) = 0"), "{failed:?}");
    let f = spec_file(body);
    let o = lenard(&[
        "check",
        "--spec",
        f.path().to_str().unwrap(),
        "--suite",
        "h1",
    ]);
    assert_eq!(o.code, r.exit_code());
    assert_eq!(o.stdout, r.to_text());
}

#[test]
fn json_reports_are_byte_identical_across_runs() {
    let f = spec_file(&format!("{Z3}{ANTIDIAGONAL}"));
    let path = f.path().to_str().unwrap();
    for args in [
        vec![
            "check",
            "--spec",
            path,
            "--suite",
            "frobenius",
            "--report",
            "json",
        ],
        vec![
            "series",
            "--potential",
            "A^2*B/2 + B^4",
            "--order",
            "5",
            "--report",
            "json",
        ],
        vec!["pipeline", "--potential", "A^3 + A*B^2", "--report", "json"],
    ] {
        let first = lenard(&args);
        let second = lenard(&args);
        assert_eq!(first.stdout, second.stdout);
        assert_eq!(first.code, second.code);
    }
}

#[test]
fn series_reports_coefficients_and_agreement() {
    let o = lenard(&[
        "series",
        "--potential",
        "A^2*B/2",
        "--order",
        "4",
        "--report",
        "json",
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json(&o.stdout);
    let data = v["data"].as_array().unwrap();
    let get = |name: &str| {
        data.iter()
            .find(|d| d["name"] == name)
            .map(|d| d["value"].as_str().unwrap().to_string())
    };
    assert_eq!(get("q_1").as_deref(), Some("1"));
    assert_eq!(get("r_0").as_deref(), Some("B"));
    assert_eq!(get("P matches closed form").as_deref(), Some("true"));

    let o = lenard(&["series", "--potential", "A^2*B/2"]);
    assert_eq!(o.code, 2);
}

#[test]
fn parse_errors_carry_line_and_column() {
    let f = spec_file("dim 2\ncoords A B\nX = (1, 0)\ntheta = (1, Z)\nK1 = [[1,0],[0,1]]\n");
    let o = lenard(&[
        "check",
        "--spec",
        f.path().to_str().unwrap(),
        "--suite",
        "h1",
    ]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("line 4, column 13"), "{}", o.stderr);

    let o = lenard(&["wdvv", "--potential", "A^2 +* B"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("line 1, column"), "{}", o.stderr);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(lenard(&[]).code, 2);
    assert_eq!(lenard(&["check", "--suite", "h1"]).code, 2);
    assert_eq!(
        lenard(&["check", "--spec", "/nonexistent/spec.txt", "--suite", "h1"]).code,
        2
    );
    assert_eq!(
        lenard(&["pipeline", "--potential", "A^2", "--report", "yaml"]).code,
        2
    );
    assert_eq!(lenard(&["--help"]).code, 0);
}

#[test]
fn binary_follows_the_same_contract() {
    let bin = env!("CARGO_BIN_EXE_lenard");
    let ok = Command::new(bin)
        .args(["pipeline", "--potential", "A^2*B/2"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let fail = Command::new(bin)
        .args(["wdvv", "--potential", "A^3/6"])
        .output()
        .unwrap();
    assert_eq!(fail.status.code(), Some(1));
    let usage = Command::new(bin).arg("frobnicate").output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}
