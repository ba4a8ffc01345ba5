use std::path::PathBuf;
use std::process::{Command, Output};

fn program(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../programs").join(name)
}

fn stepwise(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stepwise")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("stepwise-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn eval_prints_one_value() {
    let ack = program("ack.lisp");
    let o = stepwise(&["eval", ack.to_str().unwrap(), "ack", "3", "11"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "16381\n");
}

#[test]
fn eval_accepts_negative_arguments() {
    let f91 = program("f91.lisp");
    let o = stepwise(&["eval", f91.to_str().unwrap(), "f91", "-5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "91\n");
}

#[test]
fn eval_with_wrong_arity_is_a_usage_error() {
    let ack = program("ack.lisp");
    let o = stepwise(&["eval", ack.to_str().unwrap(), "ack", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("expects 2 argument"), "{}", stderr(&o));
}

#[test]
fn non_integer_argument_is_rejected() {
    let ack = program("ack.lisp");
    let o = stepwise(&["eval", ack.to_str().unwrap(), "ack", "3", "x"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn safety_cap_overflow_exits_2() {
    let ack = program("ack.lisp");
    let o = stepwise(&["eval", ack.to_str().unwrap(), "ack", "-1", "0", "--safety-cap", "1000"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("safety cap of 1000"), "{}", stderr(&o));
}

#[test]
fn parse_errors_carry_file_line_and_column() {
    let bad = scratch("bad.lisp", "(def::ung g (x)\n  (if (= x 0) 0 (g (1- x)))\n");
    let o = stepwise(&["transform", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    let prefix = format!("error: {}:", bad.display());
    assert!(err.starts_with(&prefix), "{err}");
    let rest = &err[prefix.len()..];
    let mut pos = rest.split(':');
    assert!(pos.next().unwrap().parse::<usize>().is_ok(), "{err}");
    assert!(pos.next().unwrap().parse::<usize>().is_ok(), "{err}");
}

#[test]
fn transform_prints_the_generated_definitions() {
    let ack = program("ack.lisp");
    let o = stepwise(&["transform", ack.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for name in ["(defun iack (d x y)", "(defun iack-dom (d x y)", "(defun mack (x y)", "(defun ack-domain (x y)"] {
        assert!(out.contains(name), "missing {name}");
    }
    assert!(out.contains(";; base predicate: (= x 0)"));
    assert!(out.contains("(defthm ack-measure-definition"));
}

#[test]
fn bench_has_a_row_per_mode() {
    let ack = program("ack.lisp");
    let o = stepwise(&["bench", ack.to_str().unwrap(), "ack", "2", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for mode in ["indexed", "fast", "domain", "wrapper"] {
        assert!(out.lines().any(|l| l.starts_with(mode)), "missing {mode}:\n{out}");
    }
}

#[test]
fn bench_reports_mode_errors_and_exits_2() {
    let ack = program("ack.lisp");
    let o = stepwise(&["bench", ack.to_str().unwrap(), "ack", "-1", "0", "--safety-cap", "500", "--big", "4"]);
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("fast") && l.contains("error")), "{out}");
    // The wrapper is total.
    assert!(out.lines().any(|l| l.starts_with("wrapper") && !l.contains("error")), "{out}");
}

#[test]
fn check_passes_on_ackermann() {
    let ack = program("ack.lisp");
    let o = stepwise(&["check", ack.to_str().unwrap(), "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("0 failed"));
}

#[test]
fn total_passes_and_a_wrong_measure_fails() {
    let ack = program("ack.lisp");
    let o = stepwise(&["total", ack.to_str().unwrap(), "--grid", "0..2,0..4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let text = std::fs::read_to_string(&ack).unwrap().replace("(llist x y)", "(llist y x)");
    let swapped = scratch("swapped.lisp", &text);
    let o = stepwise(&["total", swapped.to_str().unwrap(), "--grid", "0..2,0..4"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("fail"));
}

#[test]
fn machine_readable_output_is_stable() {
    let half = program("half.lisp");
    let args =
        ["--format", "machine-readable", "check", half.to_str().unwrap(), "half", "--samples", "25", "--seed", "3"];
    let a = stepwise(&args);
    let b = stepwise(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(stdout(&a), stdout(&b));
    let lines: Vec<serde_json::Value> =
        stdout(&a).lines().map(|l| serde_json::from_str(l).expect("one JSON record per line")).collect();
    assert!(!lines.is_empty());
    for r in &lines {
        assert_eq!(r["kind"], "check");
        assert_eq!(r["function"], "half");
        assert_eq!(r["status"], "pass");
    }
}

#[test]
fn unknown_function_is_an_error() {
    let ack = program("ack.lisp");
    let o = stepwise(&["check", ack.to_str().unwrap(), "nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no function `nope`"));
}
