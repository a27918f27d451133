use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mbl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mbl"))
        .args(args)
        .output()
        .expect("runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}: {}{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn bound_table_rows() {
    let out = mbl(&["bound-table", "--n-max", "10"]);
    assert!(out.status.success());
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 10);
    let last = &rows[9];
    assert_eq!(last["n"], 10);
    assert_eq!(last["jerrum_snir_bound"], "5110");
    let size: u64 = last["size"].as_str().unwrap().parse().unwrap();
    assert!(size >= 5110);
    assert!(last["ratio"].as_f64().unwrap() >= 1.0);
}

#[test]
fn counting_amplitude_for_or_clause() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = write(dir.path(), "or.cnf", "p cnf 2 1\n1 2 0\n");
    let cphi = dir.path().join("cphi.json");
    let out = mbl(&["compile-sat", &cnf, "--emit", cphi.to_str().unwrap(), "--cert"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["pass"], true);
    let out = mbl(&["amplitude", cphi.to_str().unwrap()]);
    let v = json(&out);
    assert!((v["amplitude"].as_f64().unwrap() - 0.75).abs() < 1e-9);
    assert_eq!(v["count_inferred"], 3);
    assert_eq!(v["n"], 2);
    let v = json(&mbl(&["amplitude", cphi.to_str().unwrap(), "--exact"]));
    assert_eq!(v["exact"], "3/4");
    assert_eq!(v["amplitude"], 0.75);
}

#[test]
fn violating_build_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = write(dir.path(), "ex.cnf", "p cnf 2 2\n1 2 0\n-1 2 0\n");
    let out = mbl(&["compile-sat", &cnf, "--cert", "--dedicated-leaves", "--no-fuse"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
    let out = mbl(&["compile-sat", &cnf, "--dedicated-leaves", "--no-fuse"]);
    assert_eq!(out.status.code(), Some(0));
    let out = mbl(&["compile-sat", &cnf, "--cert"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(mbl(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(mbl(&["amplitude", "/nonexistent/cphi.json"]).status.code(), Some(2));
    assert_eq!(mbl(&["permanent", "--n", "0"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.cnf", "p cnf 2 1\n3 0\n");
    assert_eq!(mbl(&["compile-sat", &bad]).status.code(), Some(2));
}

#[test]
fn diagonal_preprocessing_counts() {
    let v = json(&mbl(&["contract", "--example", "h-t-cz", "--plan", "exhaustive"]));
    assert_eq!(v["multiplications"], "40");
    let v = json(&mbl(&[
        "contract",
        "--example",
        "h-t-cz",
        "--plan",
        "exhaustive",
        "--preprocess",
    ]));
    assert_eq!(v["multiplications"], "12");
}

#[test]
fn skeleton_and_monotone_of_two_qubit_example() {
    let v = json(&mbl(&["skeleton", "--example", "two-qubit", "--polynomial"]));
    assert_eq!(v["polynomial"]["terms"], 2);
    assert_eq!(v["polynomial"]["degree"], 8);
    let v = json(&mbl(&[
        "emit-monotone",
        "--example",
        "two-qubit",
        "--plan",
        "left-to-right",
    ]));
    assert!(v["report"]["size"].as_u64().unwrap() > 0);
    assert!(v["circuit"]["nodes"].is_array());
}

#[test]
fn permanent_with_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.csv", "1,2,3\n4,5,6\n7,8,9\n");
    let emitted = dir.path().join("perm.json");
    let out = mbl(&[
        "permanent",
        "--n",
        "3",
        "--matrix",
        &m,
        "--emit-circuit",
        emitted.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["value"], "450");
    assert_eq!(v["bruteforce"], "450");
    assert_eq!(v["bound"], "9");
    assert!(emitted.exists());
}

#[test]
fn crosscheck_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(
        dir.path(),
        "c.json",
        r#"{"num_qubits":2,"gates":[{"kind":"H","wires":[0]},{"kind":"H","wires":[1]},{"kind":"CNOT","wires":[0,1]},{"kind":"H","wires":[0]}]}"#,
    );
    let a = mbl(&["crosscheck", &c, "--seed", "5"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let v = json(&a);
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 3);
    for r in results {
        assert!((r["value"][0].as_f64().unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);
    }
    let b = mbl(&["crosscheck", &c, "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
    let p1 = mbl(&["permanent", "--n", "5", "--seed", "9"]);
    let p2 = mbl(&["permanent", "--n", "5", "--seed", "9"]);
    assert_eq!(p1.stdout, p2.stdout);
}

#[test]
fn json_out_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out_file = dir.path().join("table.json");
    let out = mbl(&["bound-table", "--n-max", "4", "--json-out", out_file.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(std::fs::read(&out_file).unwrap(), out.stdout);
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = write(dir.path(), "f.cnf", "p cnf 4 3\n1 -2 3 0\n-1 4 0\n2 -3 -4 0\n");
    let cphi = dir.path().join("cphi.json");
    assert!(mbl(&["compile-sat", &cnf, "--emit", cphi.to_str().unwrap()])
        .status
        .success());
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_mbl"))
            .args(["amplitude", cphi.to_str().unwrap()])
            .env("MBL_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    assert!(one.status.success());
    assert_eq!(one.stdout, run("4").stdout);
}
