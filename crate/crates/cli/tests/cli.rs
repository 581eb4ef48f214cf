use std::path::PathBuf;
use std::process::{Command, Output};

use gmodel::report::read_records;

fn doc(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/corpus")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gmodel")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn paths_on_o2() {
    let o = run(&["--depth", "3", "paths", &doc("o2.gm")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("length 3 (8): aaa aab aba abb baa bab bba bbb"));
    assert!(out.ends_with("15 paths\n"));
}

#[test]
fn fock_defect_is_level_zero() {
    let o = run(&["ck", &doc("o2.gm")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("defect support: level 0 only"));
}

#[test]
fn broken_document_gives_witness() {
    let o = run(&["validate", &doc("broken-odometer.gm")]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("violation cocycle"));
    assert!(out.trim_end().ends_with("invalid"));
}

#[test]
fn input_errors_exit_two() {
    let o = run(&["--bogus", "validate", &doc("o2.gm")]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["validate", &doc("conformance/invalid.gm")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 12: unknown edge `c`"));
    let o = run(&["validate", &doc("missing.gm")]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["ck", "--vertex", "w", &doc("single-edge.gm")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn machine_output_parses() {
    let o2 = doc("o2.gm");
    let z3 = doc("loop-z3.gm");
    let single = doc("single-loop.gm");
    let cases: Vec<Vec<&str>> = vec![
        vec!["validate", &o2],
        vec!["paths", &o2],
        vec!["omega", "--samples", "3", &o2],
        vec!["boundary", &o2],
        vec!["--cap", "2", "--wordcap", "1", "isg", &o2],
        vec!["isg", &o2, "a * v * b^", "b * v * b^"],
        vec!["germ", &o2, "a * v * a^", "--at", "ab"],
        vec!["--cap", "2", "model", &single],
        vec!["diagnose", &o2],
        vec!["fock", &o2],
        vec!["ck", "--boundary", &o2],
        vec!["--depth", "3", "--cap", "2", "crosscheck", &single],
        vec!["action-validate", &z3],
        vec!["universal-map", &z3],
        vec!["uniqueness", &z3],
    ];
    for args in cases {
        let mut full = vec!["--format", "machine"];
        full.extend(args.iter().copied());
        let o = run(&full);
        assert_ne!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let recs = read_records(&stdout(&o)).unwrap_or_else(|e| panic!("{args:?}: {e}"));
        let last = recs.last().unwrap();
        assert_eq!(last.kind, "status", "{args:?}");
        let expected = if o.status.code() == Some(0) { "pass" } else { "fail" };
        assert_eq!(last.get("result"), Some(expected), "{args:?}");
    }
}

#[test]
fn seeded_runs_are_reproducible() {
    let args = ["--seed", "7", "--format", "machine", "omega", "--samples", "10", &doc("odometer.gm")];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn action_commands_on_loop_z3() {
    let z3 = doc("loop-z3.gm");
    let o = run(&["action-validate", &z3]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim_end().ends_with("valid"));
    let o = run(&["universal-map", &z3]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("in BoundaryTrunc: true, equivariant: true"));
    let o = run(&["uniqueness", &z3]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("64 candidates, 1 equivariant"));
}

#[test]
fn model_on_single_edge() {
    let o = run(&["--cap", "1", "model", &doc("single-edge.gm")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("2 objects, 4 arrows (0 flagged)"));
}
