use std::path::Path;
use std::process::{Command, Output};

fn rainbow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rainbow")).args(args).output().expect("spawn rainbow")
}

fn rainbow_in(dir: &Path, args: &[&str], envs: &[(&str, &str)]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rainbow"))
        .current_dir(dir)
        .envs(envs.iter().copied())
        .args(args)
        .output()
        .expect("spawn rainbow")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn rb_formula_values() {
    let out = rainbow(&["rb", "--n", "7", "--eq", "sidon"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("= 4"));

    let out = rainbow(&["rb", "--n", "12", "--eq", "sidon", "--explain"]);
    let text = stdout(&out);
    assert!(text.contains("= 6"));
    assert!(text.contains("p_m = 3, f1 = 2, f2 = 0"));

    let out = rainbow(&["rb", "--n", "3", "--eq", "schur"]);
    assert!(stdout(&out).contains("= 3"));

    // No closed form for n = 1 Schur.
    let out = rainbow(&["rb", "--n", "1", "--eq", "schur"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn rb_json_is_structured() {
    let out = rainbow(&["rb", "--n", "12", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["rb"], 6);
    assert_eq!(v["profile"]["p_m"], 3);
}

#[test]
fn construct_then_check_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for n in ["6", "9", "10", "49", "90"] {
        let out = rainbow_in(dir.path(), &["construct", "--n", n, "c.txt"], &[]);
        assert!(out.status.success(), "construct --n {n}");
        let out = rainbow_in(dir.path(), &["check", "c.txt"], &[]);
        assert_eq!(out.status.code(), Some(0), "check --n {n}");
        assert!(stdout(&out).contains("RAINBOW_FREE"));
    }
}

#[test]
fn check_reports_witnesses_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("w.txt"), "5 4\n0 1 2 3 0\n").unwrap();
    let out = rainbow_in(dir.path(), &["check", "w.txt"], &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("0+3=1+2"));

    std::fs::write(dir.path().join("bad.txt"), "5 4\n0 1 2\n").unwrap();
    let out = rainbow_in(dir.path(), &["check", "bad.txt"], &[]);
    assert_eq!(out.status.code(), Some(2));

    let out = rainbow_in(dir.path(), &["check", "missing.txt"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn witness_strategies_agree() {
    let dir = tempfile::tempdir().unwrap();
    // Extremal coloring of Z_10: both strategies report NONE.
    rainbow_in(dir.path(), &["construct", "--n", "10", "free.txt"], &[]);
    for strategy in ["brute", "reduce"] {
        let out = rainbow_in(dir.path(), &["witness", "free.txt", "--strategy", strategy], &[]);
        assert_eq!(out.status.code(), Some(0), "{strategy}");
        assert!(stdout(&out).contains("NONE"));
    }
    // A 5-colored Z_10 coloring must contain a witness.
    std::fs::write(dir.path().join("w.txt"), "10 5\n0 1 2 3 4 0 1 2 3 4\n").unwrap();
    for strategy in ["brute", "reduce"] {
        let out = rainbow_in(dir.path(), &["witness", "w.txt", "--strategy", strategy], &[]);
        assert_eq!(out.status.code(), Some(1), "{strategy}");
        assert!(stdout(&out).contains("witness"));
    }
}

#[test]
fn certify_reports_and_respects_the_bound() {
    let out = rainbow(&["certify", "--n", "9", "--eq", "sidon"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("= 5 (certified)"));
    assert!(text.contains("r = 4: rainbow-free"));

    // Convention path: no exact 4-coloring of Z_3 exists.
    let out = rainbow(&["certify", "--n", "3", "--eq", "sidon"]);
    assert!(stdout(&out).contains("= 4 (certified)"));

    let out = rainbow(&["certify", "--n", "16", "--eq", "sidon"]);
    assert_eq!(out.status.code(), Some(3));

    // The env var overrides the built-in bound in both directions.
    let out = rainbow_in(Path::new("."), &["certify", "--n", "12", "--eq", "sidon"], &[("RB_DESK_BOUND", "10")]);
    assert_eq!(out.status.code(), Some(3));
    let out = rainbow_in(Path::new("."), &["certify", "--n", "13", "--eq", "sidon", "--allow-large"], &[]);
    assert!(stdout(&out).contains("= 4 (certified)"));
}

#[test]
fn analyze_reports() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("alt.txt"), "4 2\n0 1 0 1\n").unwrap();
    let out = rainbow_in(dir.path(), &["analyze", "alt.txt", "--pattern", "1,1"], &[]);
    assert!(stdout(&out).contains("no occurrence"));
    let out = rainbow_in(dir.path(), &["analyze", "alt.txt", "--dominance"], &[]);
    assert!(stdout(&out).contains("i = 1: dominant [0, 1]"));

    // Lift of (0,1) through 5 on Z_10.
    std::fs::write(dir.path().join("lift.txt"), "10 4\n0 2 3 3 2 1 2 3 3 2\n").unwrap();
    let out = rainbow_in(dir.path(), &["analyze", "lift.txt", "--cosets", "2"], &[]);
    let text = stdout(&out);
    assert!(text.contains("R_0: [0, 2, 3]"));
    assert!(text.contains("R_1: [1, 2, 3]"));
}

#[test]
fn reduce_dumps_a_step() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("lift.txt"), "10 4\n0 2 3 3 2 1 2 3 3 2\n").unwrap();
    let out = rainbow_in(dir.path(), &["reduce", "lift.txt", "--p", "5"], &[]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["p"], 5);
    assert_eq!(v["t"], 2);
    assert_eq!(v["child"]["n"], 2);

    let out = rainbow_in(dir.path(), &["reduce", "lift.txt", "--p", "3"], &[]);
    assert_eq!(out.status.code(), Some(2));
}
