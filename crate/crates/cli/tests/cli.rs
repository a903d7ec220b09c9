use std::path::PathBuf;
use std::process::{Command, Output};

use orekit_cli::{parse_script, run_script};

fn orekit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orekit")).args(args).output().expect("binary runs")
}

fn script_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scripts").join(name)
}

fn temp_script(name: &str, body: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("orekit-{}-{name}", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path
}

const SCRIPTS: [&str; 2] = ["p2_counterexample.orekit", "p3_counterexample.orekit"];

#[test]
fn verify_p2_json_exits_zero() {
    let out = orekit(&["verify-counterexample", "--prime", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["overall"], "pass");
    assert_eq!(v["instance"]["prime"], 2);
    assert_eq!(v["digest"].as_str().unwrap().len(), 64);
    let text = String::from_utf8(out.stdout).unwrap();
    let pos: Vec<usize> = ["\"tool_version\"", "\"instance\"", "\"checks\"", "\"overall\"", "\"digest\""]
        .iter()
        .map(|k| text.find(k).unwrap())
        .collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]), "{pos:?}");
}

#[test]
fn verify_json_is_byte_identical() {
    let a = orekit(&["verify-counterexample", "--prime", "2", "--format", "json"]);
    let b = orekit(&["verify-counterexample", "--prime", "2", "--format", "json", "--parallel", "false"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_p3_text_exits_zero() {
    let out = orekit(&["verify-counterexample", "--prime", "3", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("overall: pass"));
    assert!(text.contains("not_isomorphic_obstruction"));
}

#[test]
fn non_prime_is_a_usage_error() {
    let out = orekit(&["verify-counterexample", "--prime", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not prime"));
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(orekit(&["verify-counterexample", "--format", "yaml"]).status.code(), Some(2));
    assert_eq!(orekit(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(orekit(&["check", "/nonexistent/script"]).status.code(), Some(2));
}

#[test]
fn output_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("orekit-{}-report.json", std::process::id()));
    let out = orekit(&["verify-counterexample", "--format", "json", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["overall"], "pass");
    std::fs::remove_file(path).unwrap();
}

#[test]
fn bundled_scripts_pass() {
    for name in SCRIPTS {
        let path = script_path(name);
        let out = orekit(&["check", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn bundled_scripts_round_trip() {
    for name in SCRIPTS {
        let text = std::fs::read_to_string(script_path(name)).unwrap();
        let s1 = parse_script(&text).unwrap();
        let printed = s1.to_string();
        let s2 = parse_script(&printed).unwrap();
        let stmts = |s: &orekit_cli::Script| s.lines.iter().map(|l| l.stmt.clone()).collect::<Vec<_>>();
        assert_eq!(stmts(&s1), stmts(&s2), "{name}");
        assert_eq!(s2.to_string(), printed);
    }
}

#[test]
fn empty_script_passes_with_empty_report() {
    let run = run_script(&parse_script("").unwrap());
    assert!(run.report.checks.is_empty());
    assert!(run.report.passed());
    let path = temp_script("empty", "# nothing here\n\n");
    assert_eq!(orekit(&["check", path.to_str().unwrap()]).status.code(), Some(0));
    std::fs::remove_file(path).unwrap();
}

#[test]
fn central_x_fails_with_witness() {
    let body = "field K = ratfunc(F2; x1, x2, x3)
derivation d on K: x1 -> x2, x2 -> x3, x3 -> x1
ring A = ore(K, x; delta = d)
assert central(x in A)
";
    let path = temp_script("central", body);
    let out = orekit(&["check", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["checks"][0]["status"], "fail");
    assert_eq!(v["checks"][0]["witness"], "[x, x1] = x2");
    std::fs::remove_file(path).unwrap();
}

#[test]
fn parse_errors_exit_two_with_position() {
    let path = temp_script("syntax", "field K = ratfunc(F2; u)\nwibble K\n");
    let out = orekit(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2, column 1"));
    let path2 = temp_script("undefined", "element z = u in A\n");
    let out = orekit(&["check", path2.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("undefined name `A`"));
    std::fs::remove_file(path).unwrap();
    std::fs::remove_file(path2).unwrap();
}

#[test]
fn repl_evaluates_statements() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_orekit"))
        .arg("repl")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"field K = ratfunc(Q; u)\nshow (u + 1)^2 in K\nassert zero(u - u in K)\nshow v in L\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("u^2 + 2*u + 1"), "{text}");
    assert!(text.contains("pass"));
    assert!(text.contains("undefined name `L`"));
    assert_eq!(out.status.code(), Some(0));
}
