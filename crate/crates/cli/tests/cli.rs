use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tuttesim"))
        .args(args)
        .env_remove("TUTTESIM_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn eval_triangle_at_k1() {
    let o = run(&["eval", "--graph", &data("triangle.json"), "--k", "1", "--oracle"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("value: -1 * z^0\nleaves: 1 "), "{out}");
    assert!(out.contains("oracle agrees: yes"));
}

#[test]
fn eval_json_and_csv() {
    let g = data("triangle.json");
    let o = run(&["eval", "--graph", &g, "--k", "2", "--backend", "float", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["k"], 2);
    assert_eq!(v["backend"], "float");
    assert_eq!(v["total_leaves"], 1);
    let o = run(&["eval", "--graph", &g, "--format", "csv", "--heuristic", "non-vertigan"]);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "heuristic,sum,mean,mean_dev,empty,vertigan,multicycle,planar");
    assert!(lines[1].starts_with("non-vertigan,1,"));
}

#[test]
fn hadamard_amplitude() {
    let o = run(&["amplitude", "--circuit", &data("hadamard.circ"), "--backend", "float"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("amplitude: 0.7071067811865476\n"), "{}", stdout(&o));
    let o = run(&["amplitude", "--circuit", &data("hadamard.circ"), "--oracle"]);
    assert!(stdout(&o).starts_with("amplitude: 1/2 * z^1 + -1/2 * z^3\n"), "{}", stdout(&o));
    assert!(stdout(&o).contains("oracle agrees: yes"));
}

#[test]
fn circuit_and_outcome_against_oracle() {
    let o = run(&["amplitude", "--circuit", &data("mixed.circ"), "--oracle"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("oracle agrees: yes"));
    let o = run(&["amplitude", "--xprogram", &data("flip.xprog"), "--outcome", "1", "--oracle"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("amplitude: 1 * z^2\n"), "{}", stdout(&o));
}

#[test]
fn input_errors_exit_with_one() {
    let o = run(&["amplitude", "--circuit", &data("bad.circ")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));
    let o = run(&["eval", "--graph", &data("bad.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 1"), "{}", stderr(&o));
    assert_eq!(run(&["eval", "--graph", &data("triangle.json"), "--bogus"]).status.code(), Some(1));
    assert_eq!(run(&["eval", "--graph", "/nonexistent/g.json"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    let o = run(&["amplitude", "--circuit", &data("hadamard.circ"), "--k", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn bench_golden_csv() {
    let args = ["bench", "--class", "dense", "--n", "6", "--count", "4", "--seed", "1"];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0), "{}", stderr(&first));
    let golden = std::fs::read_to_string(data("bench_dense_n6_c4_s1.csv")).unwrap();
    assert_eq!(stdout(&first), golden);
    assert_eq!(stdout(&run(&args)), golden);
}

#[test]
fn bench_log_and_threads() {
    let dir = std::env::temp_dir().join(format!("tuttesim-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (csv, log) = (dir.join("s.csv"), dir.join("s.jsonl"));
    let o = run(&[
        "bench", "--class", "sparse", "--n", "7", "--count", "3", "--seed", "9",
        "--out", csv.to_str().unwrap(), "--log", log.to_str().unwrap(), "--threads", "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let serial = run(&["bench", "--class", "sparse", "--n", "7", "--count", "3", "--seed", "9"]);
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), stdout(&serial));
    let lines = std::fs::read_to_string(&log).unwrap();
    assert_eq!(lines.lines().count(), 18);
    for l in lines.lines() {
        let v: serde_json::Value = serde_json::from_str(l).unwrap();
        assert_eq!(v["class"], "sparse");
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn selfcheck_passes() {
    let o = run(&["selfcheck", "--cases", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 6);
    assert!(out.lines().all(|l| l.starts_with("PASS ")), "{out}");
}
