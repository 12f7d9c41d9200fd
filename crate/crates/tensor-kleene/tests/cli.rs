use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tensor-kleene"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8")
}

fn corpus(name: &str) -> String {
    format!("{}/corpus/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn nf_of_matched_pair() {
    let o = run(&["nf", "p1 a q1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "a\n");
}

#[test]
fn nf_reads_stdin_lines() {
    let mut child = bin().arg("nf").stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(b"p1 q1\np1 q0\nq1 a p0\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(stdout(&o), "1\n_0_\nq1 a p0\n");
}

#[test]
fn member_of_matched_powers() {
    let o = run(&["member", "p0 (a p1)* (q1 b)* q0", "aabb"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "true\n");
    assert_eq!(stdout(&run(&["member", "p0 (a p1)* (q1 b)* q0", "aab"])), "false\n");
}

#[test]
fn bounded_equality_verdict() {
    let o = run(&["eq", "--bound", "8", "(p1 q1)*", "1"]);
    assert_eq!(stdout(&o), "equal-up-to-bound 8\n");
    let o = run(&["eq", "--bound", "4", "p1", "q1"]);
    assert!(stdout(&o).starts_with("distinct"));
}

#[test]
fn enumeration_is_sorted_and_deterministic() {
    let args = ["enum", "--bound", "14", "p0 (a p1)* (q1 b)* q0"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a), "1\na a a b b b\na a b b\na b\n");
    let j = run(&["enum", "--json", "--bound", "6", "p0 (a p1)* (q1 b)* q0"]);
    assert_eq!(stdout(&j), "[\"1\",\"a b\"]\n");
}

#[test]
fn domain_errors_exit_one_with_json() {
    let o = run(&["enum", "p7 a"]);
    assert_eq!(o.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "bracket-index");
    let o = run(&["member", "(a", "a"]);
    assert_eq!(o.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "syntax");
    let o = run(&["nf-reduced", "p1"]);
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "not-applicable");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["eq", "a"]).status.code(), Some(2));
    assert_eq!(run(&["enum", "--bound", "x", "a"]).status.code(), Some(2));
}

#[test]
fn normal_form_documents() {
    for sub in ["compile", "nf1", "nf-reduced"] {
        let o = run(&[sub, "p0 (a p1)* (q1 b)* q0"]);
        assert!(o.status.success(), "{sub}");
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        for key in ["n", "S", "F", "U", "V", "W"] {
            assert!(v.get(key).is_some(), "{sub} lacks {key}");
        }
    }
    let v: serde_json::Value = serde_json::from_slice(&run(&["nf2", "(a p1)* (q1 b)* q0 p0 (a p1)* (q1 b)*"]).stdout).unwrap();
    assert_eq!(v["kind"], "second");
    assert!(v["grammar"].as_array().is_some_and(|g| !g.is_empty()));
    let o = run(&["combine", "--op", "concat", "a p1", "q1 b"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["N_expr"].is_array());
    assert_eq!(run(&["combine", "--op", "concat", "a"]).status.code(), Some(1));
}

#[test]
fn braket_prints_sorted_pairs() {
    let o = run(&["braket", "--m", "2", "--trunc", "7", "p0"]);
    assert_eq!(stdout(&o), "0 0\n1 2\n2 4\n3 6\n");
    let o = run(&["braket", "--m", "3", "--trunc", "24", "q0 p0 + q1 p1 + q2 p2"]);
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines, (0..24).map(|k| format!("{k} {k}")).collect::<Vec<_>>());
}

#[test]
fn relcomp_single_and_random() {
    let o = run(&["relcomp", "--bound", "10", "p1 x q1 + x q0 p0 x"]);
    assert!(stdout(&o).starts_with("equal-up-to-bound 10\tcentralizer=true"));
    let a = run(&["relcomp", "--seed", "7", "--samples", "5"]);
    let b = run(&["relcomp", "--seed", "7", "--samples", "5"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 5);
}

#[test]
fn grammar_subcommands() {
    let g = corpus("anbn.cfg");
    assert_eq!(stdout(&run(&["cfgenum", "--bound", "6", &g])), "1\na a a b b b\na a b b\na b\n");
    assert_eq!(stdout(&run(&["cyk", &g, "aabb"])), "true\n");
    assert_eq!(stdout(&run(&["cyk", &g, "abab"])), "false\n");
    let e = stdout(&run(&["cfg2expr", &g]));
    let o = run(&["member", e.trim(), "aaabbb"]);
    assert_eq!(stdout(&o), "true\n");
    let o = run(&["expr2cfg", e.trim()]);
    assert!(stdout(&o).starts_with("S -> "));
    let o = run(&["cyk", "/nonexistent/grammar.cfg", "a"]);
    assert_eq!(o.status.code(), Some(1));
}
