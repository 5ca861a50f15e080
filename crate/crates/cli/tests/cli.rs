use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_approxlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

#[test]
fn stats_on_odd_residues() {
    let dir = TempDir::new().unwrap();
    let odds = write(&dir, "odds.txt", "# odd residues\n1\n3\n5\n7\n9\n");
    let o = run(&["stats", "--group", "Z/10", "--set", &odds]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("size,doubling_num,doubling_den,tripling_num,tripling_den,symmetric,has_identity")
    );
    assert_eq!(lines.next(), Some("5,1,1,,,true,false"));
}

#[test]
fn stats_with_tripling() {
    let dir = TempDir::new().unwrap();
    let s = write(&dir, "s.txt", "-1\n0\n1\n");
    let o = run(&["stats", "--group", "Z", "--set", &s, "--tripling"]);
    assert_eq!(stdout(&o).lines().nth(1), Some("3,5,3,7,3,true,true"));
}

#[test]
fn certify_refuses_non_symmetric() {
    let dir = TempDir::new().unwrap();
    let s = write(&dir, "notsym.txt", "0\n1\n");
    let o = run(&["certify", "--group", "Z", "--set", &s, "--kind", "approx"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not symmetric"));
}

#[test]
fn certify_ruzsa_and_power() {
    let dir = TempDir::new().unwrap();
    let s = write(&dir, "s.txt", "-1\n0\n1\n");
    let o = run(&["certify", "--group", "Z", "--set", &s, "--kind", "ruzsa"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().nth(1), Some("ruzsa,3,3,-3;0;3,true"));
    let o = run(&["certify", "--group", "Z", "--set", &s, "--kind", "approx", "--power", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().all(|l| !l.ends_with("false")));
}

#[test]
fn q3_law_exits_clean() {
    let o = run(&["laws", "run", "--law", "q3", "--params", "L1=2,L2=2", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("law_id,trial,seed,instance,constants,measured,bound,status"));
    assert_eq!(text.matches(",satisfied").count(), 2);
}

#[test]
fn budget_overrun_exits_three() {
    let o = run(&["laws", "run", "--law", "q3", "--params", "L1=4,L2=4", "--seed", "1", "--budget", "1000"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("budget_exceeded"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["laws", "run", "--law", "nope", "--seed", "1"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["stats", "--group", "Z/0", "--set", "x"]).status.code(), Some(2));
    assert_eq!(run(&["stats", "--group", "Z", "--set", "/nonexistent/set.txt"]).status.code(), Some(2));
}

#[test]
fn reports_identical_across_jobs() {
    let dir = TempDir::new().unwrap();
    let mut outputs = Vec::new();
    for jobs in ["1", "3"] {
        let out = path(&dir, &format!("r{jobs}.csv"));
        let o = run(&[
            "laws", "run", "--law", "tripling", "--trials", "40", "--seed", "9", "--jobs", jobs, "--out", &out,
        ]);
        assert_eq!(o.status.code(), Some(0));
        outputs.push(fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let rerun = path(&dir, "again.csv");
    run(&["laws", "run", "--law", "tripling", "--trials", "40", "--seed", "9", "--out", &rerun]);
    assert_eq!(fs::read(&rerun).unwrap(), outputs[0]);
}

#[test]
fn gen_figure_progression() {
    let o = run(&["gen", "--group", "Z", "--spec", "prog x=9,2 L=2,1"]);
    let got: Vec<i64> = stdout(&o).lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(got, vec![-20, -18, -16, -11, -9, -7, -2, 0, 2, 7, 9, 11, 16, 18, 20]);
    let o = run(&["gen", "--group", "Z^2", "--spec", "box L=2,1"]);
    assert_eq!(stdout(&o).lines().count(), 15);
    let o = run(&["gen", "--group", "H(Z)", "--spec", "Q L1=1 L2=1", "--l2-mode", "symmetric"]);
    assert_eq!(stdout(&o).lines().count(), 27);
}

#[test]
fn cayley_build_exports_graph() {
    let dir = TempDir::new().unwrap();
    let gens = write(&dir, "gens.txt", "1\n5\n");
    let out = path(&dir, "cycle.txt");
    let o = run(&["cayley", "build", "--group", "Z/6", "--gens", &gens, "--out", &out]);
    assert_eq!(o.status.code(), Some(0));
    let edges = fs::read_to_string(&out).unwrap();
    assert_eq!(edges.lines().count(), 6);
    assert!(edges.lines().any(|l| l == "0 5"));
    let map = fs::read_to_string(format!("{out}.vertices")).unwrap();
    assert_eq!(map.lines().next(), Some("0 0"));
    assert!(Path::new(&format!("{out}.vertices")).exists());

    let gens = write(&dir, "half.txt", "2\n4\n");
    let o = run(&["cayley", "build", "--group", "Z/6", "--gens", &gens]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cheeger_exact_is_job_independent() {
    let dir = TempDir::new().unwrap();
    let gens = write(&dir, "gens.txt", "1\n19\n");
    let a = run(&["cayley", "cheeger", "--group", "Z/20", "--gens", &gens, "--exact", "--jobs", "1"]);
    let b = run(&["cayley", "cheeger", "--group", "Z/20", "--gens", &gens, "--exact", "--jobs", "4"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().nth(1).unwrap().split(',').nth(3), Some("1/5"));
}

#[test]
fn cheeger_heuristic_records_seed() {
    let dir = TempDir::new().unwrap();
    let gens = write(&dir, "gens.txt", "1\n39\n");
    let o = run(&["cayley", "cheeger", "--group", "Z/40", "--gens", &gens, "--heuristic", "--seed", "5"]);
    let line = stdout(&o).lines().nth(1).unwrap().to_string();
    assert!(line.starts_with("heuristic,40,1/20,"));
    assert!(line.ends_with(",5"));
}

#[test]
fn probe_writes_one_row_per_trial() {
    let o = run(&["cayley", "probe", "--p", "7", "--trials", "100", "--epsilon", "0.1", "--seed", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 101);
    assert!(text.lines().skip(1).all(|l| l.starts_with("2,")));
}
