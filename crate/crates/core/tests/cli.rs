use std::path::PathBuf;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_cozero");

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cozero-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("COZERO_SEED").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn assert_error(o: &Output) {
    assert_eq!(o.status.code(), Some(2), "stdout: {}\nstderr: {}", stdout(o), stderr(o));
    let err = stderr(o);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with("error: "), "{err}");
}

#[test]
fn translate_atom() {
    let o = run(&["translate", "--expr", "x1 <= x2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "v[x2|x1] = bot\n");
}

#[test]
fn count_only() {
    let o = run(&["translate", "--expr", "E y. 0 <= y", "--count-only"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("D_phi: 16"), "{out}");
    assert!(out.contains("Delta free variables: 9 (formula 9)"), "{out}");
    assert!(out.contains("consistent: true"), "{out}");
    let o = run(&["translate", "--expr", "E y. 0 <= y", "--count-only", "--emit", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["bound"], "16");
}

#[test]
fn fixed_schedule_banner() {
    let o = run(&["translate", "--expr", "E y. 0 <= y", "--schedule", "fixed:1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("# UNSOUND-SCHEDULE: fixed:1"), "{out}");
    assert!(!out.contains("delta("), "{out}");
}

#[test]
fn check_qf_exit_codes() {
    let f = scratch("nonneg.txt", "x1 -> pl: (0, 0) (1/2, 1) (1, 0)\n");
    let o = run(&["check-qf", "--formula", "0 <= x1", "--functions", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["agree"], true);
    assert_eq!(v["lhs"], true);
    let o = run(&["check-qf", "--formula", "x1 <= 0", "--functions", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["agree"], true);
}

#[test]
fn lambda_then_validate() {
    let f = scratch("two.txt", "x1 -> pl: (0, 0) (1, 1)\nx2 -> pl: (0, 1) (1/2, 0) (1, 1)\n");
    let o = run(&["lambda", "--functions", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let fam = scratch("two.fam", &stdout(&o));
    let o = run(&["validate-family", "--family", fam.to_str().unwrap(), "--arithmetic"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("result: pass"));
}

#[test]
fn extend_worked_instance() {
    let f = scratch("zero.txt", "x1 -> pl: (0, 0) (1, 0)\n");
    let fam = scratch("worked.fam", "index: x1 ; x2\nv[x1|x2] : (0,1/2)\nv[x2|x1] : (1/2,1)\n");
    let o = run(&["extend", "--functions", f.to_str().unwrap(), "--family", fam.to_str().unwrap(), "--sparse"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "x2 -> pl: (0, 0) (1/4, 1/4) (1/2, 0) (3/4, -1/8) (1, 0)\n");
    let o = run(&["extend", "--functions", f.to_str().unwrap(), "--family", fam.to_str().unwrap()]);
    assert_error(&o);
}

#[test]
fn mix_worked_instance() {
    let m = scratch(
        "worked.mix",
        "space: [0,1]\nA: {0}\nB: {1}\nU: (0,1)\nF: pl: (0, 0) (1, 0)\nG: pl: (0, 1) (1, 1)\nh: pl: (0, 0) (1, 1)\nd: pl: (0, 0) (1/2, 1/2) (1, 0)\n",
    );
    let o = run(&["mix", "--input", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "pl: (0, 0) (1/3, 2/3) (1, 1)\n");
}

#[test]
fn witness_and_roundtrip() {
    let f = scratch("id.txt", "x1 -> pl: (0, 0) (1, 1)\n");
    let h = scratch("half.txt", "x2 -> pl: (0, 0) (1, 1/2)\n");
    let o = run(&["witness", "--functions", f.to_str().unwrap(), "--var", "x2", "--hidden", h.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("# realized pairs: 81"));
    assert!(stdout(&o).ends_with("x2 -> pl: (0, 0) (1, 1/2)\n"));
    let args = ["roundtrip", "--formula", "0 <= x2 & x2 <= x1", "--functions", f.to_str().unwrap(), "--var", "x2", "--hidden", h.to_str().unwrap()];
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["agree"], true);
    assert_eq!(v["family_valid"], true);
}

#[test]
fn certificate_check() {
    let f = scratch("cert-f.txt", "x1 -> pl: (0, 0) (1, 1)\n");
    let w = scratch("cert-w.txt", "x2 -> pl: (0, 0) (1, 1/2)\n");
    for schedule in ["fixed:1", "fixed:2"] {
        let o = run(&[
            "check-cert", "--formula", "E x2. (0 <= x2 & x2 <= x1)", "--functions", f.to_str().unwrap(),
            "--witnesses", w.to_str().unwrap(), "--schedule", schedule,
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["agree"], true);
    }
}

#[test]
fn failures_exit_two_with_one_line() {
    let missing = std::env::temp_dir().join("cozero-no-such-file.txt");
    let cases: Vec<Vec<&str>> = vec![
        vec!["translate", "--expr", "x1 <= "],
        vec!["translate", "--expr", "x1 <= x2", "--schedule", "fixed:x"],
        vec!["translate", "--expr", "x1 <= x2", "--bogus"],
        vec!["frobnicate"],
        vec!["check-qf", "--formula", "0 <= x1", "--functions", missing.to_str().unwrap()],
        vec!["mix", "--input", missing.to_str().unwrap()],
        vec!["lambda", "--functions", missing.to_str().unwrap()],
        vec!["validate-family", "--family", missing.to_str().unwrap()],
        vec!["witness", "--functions", missing.to_str().unwrap(), "--var", "x2", "--family", missing.to_str().unwrap()],
        vec!["roundtrip", "--formula", "x1 <= x2", "--functions", missing.to_str().unwrap(), "--var", "x2", "--hidden", missing.to_str().unwrap()],
    ];
    for args in cases {
        assert_error(&run(&args));
    }
    let bad = scratch("bad.txt", "x1 -> pl: (0, 0) (1/2, 1)\n");
    assert_error(&run(&["check-qf", "--formula", "0 <= x1", "--functions", bad.to_str().unwrap()]));
    let ok = scratch("ok.txt", "x1 -> pl: (0, 0) (1, 1)\n");
    assert_error(&run(&["check-qf", "--formula", "E y. y <= x1", "--functions", ok.to_str().unwrap()]));
}

#[test]
fn output_is_deterministic() {
    let f = scratch("det.txt", "x1 -> pl: (0, 0) (1/3, 1) (1, -1)\nx2 -> pl: (0, 1/2) (1, 0)\n");
    let invocations: Vec<Vec<&str>> = vec![
        vec!["translate", "--expr", "E y. (x1 <= y & y <= x2)", "--schedule", "fixed:1", "--emit", "json"],
        vec!["translate", "--expr", "E y. (x1 <= y & y <= x2)", "--count-only", "--emit", "json"],
        vec!["lambda", "--functions", f.to_str().unwrap(), "--d", "2"],
        vec!["check-qf", "--formula", "x1 <= x2 | ~(0 <= x1)", "--functions", f.to_str().unwrap()],
    ];
    for args in invocations {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
