//! End to end tests of the binary: script errors, exit codes, and the
//! determinism guarantees of the JSON document.

use std::process::Command;

fn run(script: &str, args: &[&str], envs: &[(&str, &str)]) -> (String, String, i32) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("script.kl");
    std::fs::write(&path, script).unwrap();
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_klift"));
    cmd.arg(&path);
    for a in args {
        cmd.arg(a);
    }
    for (k, v) in envs {
        cmd.env(k, v);
    }
    let out = cmd.output().unwrap();
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap_or(-1),
    )
}

const BASIC: &str = "\
ring A = poly(F5; x:1, y:1) / ideal(x*y)
module M = coker(A; shifts=[0]; rels=[[x], [y]])
resolve(M; len=3)
ext(M, M; i=2)
regseq(A; x, y)
koszul(A; x, y)
";

#[test]
fn degrees_below_one_are_rejected() {
    let (_, err, code) = run("ring A = poly(F5; x:0, y:1)\n", &[], &[]);
    assert_eq!(code, 2);
    assert!(err.contains("degrees must be \u{2265} 1"), "stderr: {err}");
}

#[test]
fn parse_errors_carry_positions_and_exit_two() {
    let (_, err, code) = run("ring A poly(F5; x:1)\n", &[], &[]);
    assert_eq!(code, 2);
    assert!(err.contains("line 1"), "stderr: {err}");
}

#[test]
fn unreadable_script_exits_two() {
    let out = Command::new(env!("CARGO_BIN_EXE_klift"))
        .arg("/nonexistent/script.kl")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn successful_run_exits_zero_with_status_ok() {
    let (stdout, _, code) = run(BASIC, &[], &[]);
    assert_eq!(code, 0, "stdout: {stdout}");
    assert!(stdout.contains("status: ok"));
    assert!(stdout.contains("regseq"));
    assert!(stdout.contains("false"));
}

#[test]
fn failing_command_exits_one_but_still_reports() {
    let script = "\
ring A = poly(F3; x:1)
ring B = poly(F5; y:1)
module M = coker(A; shifts=[0]; rels=[[x]])
module N = coker(B; shifts=[0]; rels=[[y]])
resolve(M)
ext(M, N)
";
    let (stdout, _, code) = run(script, &["--json"], &[]);
    assert_eq!(code, 1);
    let doc: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(doc["status"], "error");
    assert_eq!(doc["commands"][0]["status"], "ok");
    assert_eq!(doc["commands"][1]["status"], "error");
    assert!(doc["commands"][1]["error"]
        .as_str()
        .unwrap()
        .contains("different rings"));
}

#[test]
fn unknown_command_is_a_command_error() {
    let (stdout, _, code) = run("frobnicate(1, 2)\n", &["--json"], &[]);
    assert_eq!(code, 1);
    let doc: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert!(doc["commands"][0]["error"]
        .as_str()
        .unwrap()
        .contains("unknown command"));
}

#[test]
fn reruns_are_byte_identical() {
    let (a, _, code_a) = run(BASIC, &["--json"], &[]);
    let (b, _, code_b) = run(BASIC, &["--json"], &[]);
    assert_eq!(code_a, 0);
    assert_eq!(code_b, 0);
    assert_eq!(a, b);
}

#[test]
fn parallel_output_matches_sequential_for_every_thread_count() {
    let (seq, _, code) = run(BASIC, &["--json"], &[]);
    assert_eq!(code, 0);
    for threads in ["1", "2", "4"] {
        let (par, _, code) = run(
            BASIC,
            &["--json", "--parallel"],
            &[("KLIFT_THREADS", threads)],
        );
        assert_eq!(code, 0);
        assert_eq!(seq, par, "thread count {threads} changed the output");
    }
}

#[test]
fn json_document_reparses_to_a_fixed_point() {
    let (stdout, _, code) = run(BASIC, &["--json"], &[]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let mut reemitted = serde_json::to_string_pretty(&doc).unwrap();
    reemitted.push('\n');
    assert_eq!(stdout, reemitted);
}

#[test]
fn seed_and_breadth_flags_are_recorded_in_the_document() {
    let (stdout, _, code) = run(BASIC, &["--json", "--seed", "7", "--retry-breadth", "3"], &[]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(doc["seed"], 7);
    assert_eq!(doc["bounds"]["retry_breadth"], 3);
}

#[test]
fn inline_constructors_match_declared_names() {
    let declared = "\
ring A = poly(F3; u:1)
module K = coker(A; shifts=[0]; rels=[[u]])
lift(K; x=u; N=2; D=4)
";
    let inline = "lift(M=coker(poly(F3; u:1); shifts=[0]; rels=[[u]]); x=u; N=2; D=4)\n";
    let (a, _, code_a) = run(declared, &["--json"], &[]);
    let (b, _, code_b) = run(inline, &["--json"], &[]);
    assert_eq!(code_a, 0);
    assert_eq!(code_b, 0);
    let da: serde_json::Value = serde_json::from_str(&a).unwrap();
    let db: serde_json::Value = serde_json::from_str(&b).unwrap();
    assert_eq!(da["commands"][0]["payload"], db["commands"][0]["payload"]);
}

#[test]
fn rebinding_a_name_is_rejected() {
    let script = "\
ring A = poly(F3; x:1)
module A = free(poly(F3; x:1); shifts=[0])
";
    let (_, err, code) = run(script, &[], &[]);
    assert_eq!(code, 2);
    assert!(err.contains("already bound"), "stderr: {err}");
}

#[test]
fn multiline_statements_and_comments_work() {
    let script = "\
# a wrapped declaration
module M = coker(poly(F2; x:1, y:1);
                 shifts=[0];   # generator degrees
                 rels=[[x*y]])
resolve(M; len=2)
";
    let (stdout, _, code) = run(script, &[], &[]);
    assert_eq!(code, 0, "stdout: {stdout}");
    assert!(stdout.contains("F_1: rank 1"));
}

#[test]
fn paper_examples_pass() {
    let (stdout, _, code) = run("paper-examples\n", &["--json"], &[]);
    assert_eq!(code, 0, "stdout: {stdout}");
    let doc: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(doc["commands"][0]["payload"]["all_pass"], true);
}
