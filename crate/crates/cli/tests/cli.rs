//! End-to-end tests of the `hcma` binary: exit codes, file outputs, and
//! byte-level determinism.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::atomic::{AtomicUsize, Ordering};

static COUNTER: AtomicUsize = AtomicUsize::new(0);

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "hcma-cli-{}-{}-{}",
        tag,
        std::process::id(),
        COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("experiment.toml");
    std::fs::write(&path, body).unwrap();
    path
}

fn hcma() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hcma"))
}

fn cosine_config(out_dir: &Path, amplitude: f64, nx: usize, nt: usize, sweep: &str) -> String {
    format!(
        r#"
[domain]
n = 1
nx = {nx}
ny = 8
nt = {nt}
y_invariant = true
metric_b = [[[1.0, 0.0]]]

[boundary.t0]
kind = "cosine_x"
amplitude = {amplitude}
phase = 0.0

[boundary.t1]
kind = "cosine_x"
amplitude = {amplitude}
phase = 0.25

[convexity]
s = [[[0.0, 0.0]]]
mu = 0.8
delta = 0.0
p_list = [4]

[solver]
epsilon = 0.05

{sweep}

[output]
dir = "{}"
formats = ["csv", "bin"]
"#,
        out_dir.display()
    )
}

fn csv_column(text: &str, name: &str) -> Vec<f64> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().expect("header row");
    let idx = header
        .split(',')
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("column {name} in {header}"));
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').nth(idx).unwrap().parse::<f64>().unwrap())
        .collect()
}

#[test]
fn zero_boundary_solve_matches_quadratic() {
    let dir = scratch_dir("zero");
    let out = dir.join("out");
    // nt odd puts t = 1/2 on the grid.
    let cfg = write_config(&dir, &cosine_config(&out, 0.0, 16, 7, ""));
    let status = hcma().args(["solve", "--config"]).arg(&cfg).arg("--quiet").status().unwrap();
    assert_eq!(status.code(), Some(0));
    let csv = std::fs::read_to_string(out.join("solution.csv")).unwrap();
    let phi = csv_column(&csv, "phi");
    let sup = phi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    // ‖φ‖∞ = εn/2 = 0.025 for the z-independent quadratic.
    assert!((sup - 0.025).abs() < 1e-10, "sup {sup}");
    let report = std::fs::read_to_string(out.join("report.txt")).unwrap();
    assert!(report.contains("overall: pass"));
}

#[test]
fn cosine_solve_modulus_column() {
    let dir = scratch_dir("cosine");
    let out = dir.join("out");
    let cfg = write_config(&dir, &cosine_config(&out, 0.01, 32, 30, ""));
    let status = hcma().args(["solve", "--config"]).arg(&cfg).arg("--quiet").status().unwrap();
    assert_eq!(status.code(), Some(0));
    let slices = std::fs::read_to_string(out.join("slices.csv")).unwrap();
    // Boundary modulus 1 − 2π²·0.01 ≈ 0.8026; every slice stays above μ − tol.
    for m in csv_column(&slices, "modulus") {
        assert!(m >= 0.80, "slice modulus {m}");
    }
}

#[test]
fn nonconvex_boundary_is_a_config_error() {
    let dir = scratch_dir("nonconvex");
    let out = dir.join("out");
    // c = 0.06 > 1/(2π²) ≈ 0.0507 breaks strict convexity of the boundary.
    let cfg = write_config(&dir, &cosine_config(&out, 0.06, 16, 6, ""));
    let output = hcma().args(["solve", "--config"]).arg(&cfg).arg("--quiet").output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(
        stderr.contains("not strictly convex"),
        "stderr should name the failed boundary-convexity precondition: {stderr}"
    );
}

#[test]
fn malformed_config_is_a_config_error() {
    let dir = scratch_dir("badcfg");
    let cfg = write_config(&dir, "[domain]\nn = 3\n");
    let status = hcma().args(["solve", "--config"]).arg(&cfg).arg("--quiet").status().unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn solve_outputs_are_deterministic() {
    let dir = scratch_dir("determinism");
    let out_a = dir.join("a");
    let out_b = dir.join("b");
    let cfg = write_config(&dir, &cosine_config(&dir.join("unused"), 0.01, 16, 6, ""));
    for out in [&out_a, &out_b] {
        let status = hcma()
            .args(["solve", "--config"])
            .arg(&cfg)
            .arg("--quiet")
            .arg("--out")
            .arg(out)
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
    }
    for name in ["solution.csv", "slices.csv", "report.txt", "solution.bin"] {
        let a = std::fs::read(out_a.join(name)).unwrap();
        let b = std::fs::read(out_b.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical runs");
    }
}

#[test]
fn report_command_reverifies_stored_solution() {
    let dir = scratch_dir("report");
    let out = dir.join("out");
    let cfg = write_config(&dir, &cosine_config(&out, 0.01, 16, 6, ""));
    assert_eq!(
        hcma().args(["solve", "--config"]).arg(&cfg).arg("--quiet").status().unwrap().code(),
        Some(0)
    );
    for name in ["solution.csv", "solution.bin"] {
        let rep_out = dir.join(format!("reverify-{name}"));
        let status = hcma()
            .args(["report", "--config"])
            .arg(&cfg)
            .arg("--solution")
            .arg(out.join(name))
            .arg("--quiet")
            .arg("--out")
            .arg(&rep_out)
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0), "report from {name}");
        let report = std::fs::read_to_string(rep_out.join("report.txt")).unwrap();
        assert!(report.contains("overall: pass"));
    }
}

#[test]
fn sweep_single_epsilon_one_row() {
    let dir = scratch_dir("sweep1");
    let out = dir.join("out");
    let cfg = write_config(
        &dir,
        &cosine_config(&out, 0.01, 16, 6, "[sweep]\neps_list = [0.1]"),
    );
    let status = hcma().args(["sweep", "--config"]).arg(&cfg).arg("--quiet").status().unwrap();
    assert_eq!(status.code(), Some(0));
    let csv = std::fs::read_to_string(out.join("sweep.csv")).unwrap();
    assert_eq!(csv_column(&csv, "epsilon").len(), 1);
}

#[test]
fn sweep_zero_boundary_distance_closed_form() {
    let dir = scratch_dir("sweep0");
    let out = dir.join("out");
    let cfg = write_config(
        &dir,
        &cosine_config(&out, 0.0, 16, 7, "[sweep]\neps_list = [0.2, 0.1, 0.05]"),
    );
    let status = hcma().args(["sweep", "--config"]).arg(&cfg).arg("--quiet").status().unwrap();
    assert_eq!(status.code(), Some(0));
    let csv = std::fs::read_to_string(out.join("sweep.csv")).unwrap();
    let eps = csv_column(&csv, "epsilon");
    let dist = csv_column(&csv, "step_distance_sup");
    // Halving sweep: the distance column equals n·ε/2 for each row after the
    // first (which has no predecessor and records 0).
    assert_eq!(dist[0], 0.0);
    for k in 1..eps.len() {
        assert!((dist[k] - eps[k] / 2.0).abs() < 1e-10, "row {k}: {} vs {}", dist[k], eps[k] / 2.0);
    }
}

#[test]
fn sweep_requires_descending_list() {
    let dir = scratch_dir("sweepbad");
    let out = dir.join("out");
    let cfg = write_config(
        &dir,
        &cosine_config(&out, 0.01, 16, 6, "[sweep]\neps_list = [0.1, 0.2]"),
    );
    let status = hcma().args(["sweep", "--config"]).arg(&cfg).arg("--quiet").status().unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn lemma_tests_pass_across_seeds() {
    for seed in [1u64, 2, 3, 4, 5, 6, 7, 8, 9, 10] {
        let output = hcma()
            .args(["lemma-tests", "--count", "15", "--seed", &seed.to_string()])
            .output()
            .unwrap();
        assert_eq!(output.status.code(), Some(0), "seed {seed}");
    }
}

#[test]
fn lemma_tests_zero_count_warns_vacuous() {
    let output = hcma().args(["lemma-tests", "--count", "0"]).output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("0 cases"), "missing vacuous-pass warning: {stdout}");
}

#[test]
fn lemma_tests_deterministic_table() {
    let dir = scratch_dir("lemdet");
    let mut tables = Vec::new();
    for sub in ["x", "y"] {
        let out = dir.join(sub);
        let status = hcma()
            .args(["lemma-tests", "--count", "10", "--seed", "99", "--out"])
            .arg(&out)
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
        tables.push(std::fs::read(out.join("lemma_tests.txt")).unwrap());
    }
    assert_eq!(tables[0], tables[1]);
}
