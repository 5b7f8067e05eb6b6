use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_chebrank"))
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("chebrank-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_identity_is_pc() {
    let p = scratch("id.csv", "1,0\n0,1\n");
    let o = run(&["check", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn check_reports_ties_with_exit_3() {
    let p = scratch("tie.csv", "1,1\n0,1\n");
    let o = run(&["check", p.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("\"bad_rows\": [\n    1\n  ]"));
}

#[test]
fn approx_identity_matrix_market() {
    let p = scratch(
        "id.mtx",
        "%%MatrixMarket matrix array real general\n2 2\n1\n0\n0\n1\n",
    );
    let o = run(&["approx", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("\"error\": 0.5,"), "{text}");
    assert!(text.contains("\"terminated\": \"dnf-full\""));
}

#[test]
fn approx_run_limit_exit_2() {
    let p = scratch("id4.csv", "1,0,0,0\n0,1,0,0\n0,0,1,0\n0,0,0,1\n");
    let o = run(&["approx", p.to_str().unwrap(), "--run-limit", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("\"run-limit\""));
}

#[test]
fn approx_rejects_non_pc_and_bad_input() {
    let p = scratch("tie2.csv", "1,1\n0,1\n");
    assert_eq!(run(&["approx", p.to_str().unwrap()]).status.code(), Some(1));
    let q = scratch("bad.csv", "1,2\n3,oops\n");
    let o = run(&["approx", q.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2, column 3"));
    // a small perturbation breaks the tie
    let o = run(&["approx", p.to_str().unwrap(), "--perturb", "1e-3", "--seed", "4"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn oracle_refuses_seventeen_columns() {
    let row: Vec<String> = (0..17).map(|j| format!("{}", j + 1)).collect();
    let body = format!("{}\n{}\n", row.join(","), row.join(","));
    let p = scratch("wide.csv", &body);
    assert_eq!(run(&["oracle", p.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn graph_full_outputs_both_digraphs() {
    let p = scratch("small.csv", "3,2\n1,0.5\n");
    let o = run(&["graph", p.to_str().unwrap(), "--full"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.matches("digraph").count(), 2);
    let o = run(&["graph", p.to_str().unwrap(), "--full", "--limit", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bench_is_deterministic_except_timing() {
    let strip = |o: Output| -> Vec<String> {
        stdout(&o)
            .lines()
            .map(|l| {
                let f: Vec<&str> = l.split(',').collect();
                format!("{},{},{},{}", f[0], f[1], f[2], f[4])
            })
            .collect()
    };
    let args = ["bench", "--sizes", "10", "--trials", "3", "--seed", "7"];
    let first = strip(run(&args));
    let second = strip(run(&args));
    assert_eq!(first, second);
    assert_eq!(first[0], "n,trial,runs,error");
    assert_eq!(first.len(), 1 + 3 + 1);
    assert!(first[4].starts_with("10,-1,"));
}
