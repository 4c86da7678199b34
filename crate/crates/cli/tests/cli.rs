use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hybrid_simplex::engine::solve_reference;
use hybrid_simplex::generator::{generate_dense, GenSpec};
use hybrid_simplex::lp_core::{PivotRule, Tolerances};
use tempfile::TempDir;

fn hsimplex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hsimplex"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn objective_line(text: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix("objective: "))
        .expect("objective printed")
        .trim()
        .parse()
        .unwrap()
}

const UNBOUNDED: &str = "NAME U\nROWS\n N obj\n L c1\nCOLUMNS\n x obj -1 c1 1\n y obj -1 c1 -1\nRHS\n rhs c1 1\nENDATA\n";
const INFEASIBLE: &str = "NAME I\nROWS\n N obj\n L c1\n G c2\nCOLUMNS\n x obj 1 c1 1\n x c2 1\nRHS\n rhs c1 1 c2 2\nENDATA\n";

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&hsimplex(&["--help"])), 0);
    assert_eq!(code(&hsimplex(&["--version"])), 0);
    assert_eq!(code(&hsimplex(&["solve", "--help"])), 0);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&hsimplex(&[])), 1);
    assert_eq!(code(&hsimplex(&["solve", "--bogus"])), 1);
    assert_eq!(code(&hsimplex(&["solve", "--input", "/nonexistent/file.mps"])), 1);
    let dir = TempDir::new().unwrap();
    let lp = write(&dir, "u.mps", UNBOUNDED);
    assert_eq!(code(&hsimplex(&["solve", "--input", s(&lp), "--lanes", "gpu:3"])), 1);
    assert_eq!(code(&hsimplex(&["solve", "--input", s(&lp), "--theta", "1.5"])), 1);
    let bad = write(&dir, "bad.mps", "NAME\nROWS\n N obj\nCOLUMNS\n x obj abc\nENDATA\n");
    let out = hsimplex(&["solve", "--input", s(&bad)]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("abc"));
}

#[test]
fn generate_then_solve_matches_library() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("g.mps");
    let out = hsimplex(&["generate", "--rows", "12", "--cols", "9", "--seed", "5", "--out", s(&path)]);
    assert_eq!(code(&out), 0);
    let solved = hsimplex(&["solve", "--input", s(&path), "--lanes", "cpu:2,dev:0.5,dev:0.5", "--theta", "0.6"]);
    assert_eq!(code(&solved), 0, "{}", stdout(&solved));
    let text = stdout(&solved);
    assert!(text.contains("status: optimal"), "{text}");

    let problem = generate_dense(&GenSpec::new(12, 9, 5)).unwrap();
    let expected = solve_reference(&problem, PivotRule::Dantzig, Tolerances::default());
    assert!((objective_line(&text) - expected.objective).abs() <= 1e-8 * expected.objective.abs().max(1.0));
}

#[test]
fn generate_to_stdout_is_deterministic() {
    let a = hsimplex(&["generate", "--rows", "3", "--cols", "4", "--seed", "42"]);
    let b = hsimplex(&["generate", "--rows", "3", "--cols", "4", "--seed", "42"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("NAME "));
}

#[test]
fn status_exit_codes() {
    let dir = TempDir::new().unwrap();
    let u = write(&dir, "u.mps", UNBOUNDED);
    let i = write(&dir, "i.mps", INFEASIBLE);
    assert_eq!(code(&hsimplex(&["solve", "--input", s(&u)])), 2);
    assert_eq!(code(&hsimplex(&["solve", "--input", s(&i)])), 3);

    let g = dir.path().join("g.mps");
    hsimplex(&["generate", "--rows", "10", "--cols", "10", "--seed", "1", "--out", s(&g)]);
    let out = hsimplex(&["solve", "--input", s(&g), "--max-iters", "1"]);
    assert_eq!(code(&out), 4, "{}", stdout(&out));
}

#[test]
fn trace_is_identical_across_layouts() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("g.mps");
    hsimplex(&["generate", "--rows", "15", "--cols", "11", "--seed", "3", "--out", s(&g)]);
    let layouts: [&[&str]; 3] = [
        &["--lanes", "cpu:1"],
        &["--lanes", "cpu:3"],
        &["--lanes", "cpu:2,dev:0.45,dev:0.55", "--theta", "0.8"],
    ];
    let mut traces = Vec::new();
    for (n, layout) in layouts.iter().enumerate() {
        let trace = dir.path().join(format!("t{n}.csv"));
        let mut args = vec!["solve", "--input", s(&g), "--trace", s(&trace)];
        args.extend_from_slice(layout);
        assert_eq!(code(&hsimplex(&args)), 0);
        traces.push(fs::read_to_string(&trace).unwrap());
    }
    assert!(!traces[0].is_empty());
    for line in traces[0].lines() {
        assert_eq!(line.split(',').count(), 5, "{line}");
    }
    assert_eq!(traces[0], traces[1]);
    assert_eq!(traces[0], traces[2]);
}

#[test]
fn solve_reads_stdin() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("g.mps");
    hsimplex(&["generate", "--rows", "4", "--cols", "4", "--seed", "8", "--out", s(&g)]);
    let out = Command::new(env!("CARGO_BIN_EXE_hsimplex"))
        .args(["solve", "--input", "-"])
        .stdin(fs::File::open(&g).unwrap())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("status: optimal"));
}

#[test]
fn bench_writes_csv() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("g.mps");
    let csv = dir.path().join("b.csv");
    hsimplex(&["generate", "--rows", "20", "--cols", "20", "--seed", "2", "--out", s(&g)]);
    let out = hsimplex(&["bench", "--input", s(&g), "--lane-counts", "1,2", "--reps", "1", "--csv", s(&csv)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("label,p,theta,time_per_iter,iterations,speedup,efficiency"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn sweep_covers_the_grid() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("g.mps");
    let csv = dir.path().join("s.csv");
    hsimplex(&["generate", "--rows", "16", "--cols", "16", "--seed", "4", "--out", s(&g)]);
    let out = hsimplex(&[
        "sweep",
        "--input",
        s(&g),
        "--lanes",
        "cpu:1,dev:0.4,dev:0.6",
        "--theta-step",
        "0.5",
        "--csv",
        s(&csv),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("best theta:"));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("label,p,theta,theta_1,theta_2,time_per_iter,iterations,speedup,efficiency")
    );
    assert_eq!(lines.count(), 3);
}
