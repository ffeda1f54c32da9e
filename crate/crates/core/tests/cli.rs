//! End-to-end runs of the command-line binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn antisym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_antisym")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_analyze_and_approximate() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    let out = antisym(&["gen", "random", "--n", "7", "--d", "3", "--seed", "5", "--output", path(&a)]);
    assert!(out.status.success());
    assert_eq!(json(&out)["n"], 7);
    antisym(&["--seed", "5", "gen", "random", "--n", "7", "--d", "3", "--output", path(&b)]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let text = std::fs::read_to_string(&a).unwrap();
    assert!(text.starts_with("tensor 3 7 7 7\n"));

    let rank = json(&antisym(&["rank", "--input", path(&a)]));
    assert_eq!(rank["rank"], 7);

    let trace = dir.path().join("trace.csv");
    let recon = dir.path().join("recon.txt");
    let out = antisym(&["jacobi", "--input", path(&a), "--rank", "5", "--trace", path(&trace), "--output", path(&recon)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let s = json(&out);
    assert_eq!(s["status"], "converged");
    let header = std::fs::read_to_string(&trace).unwrap();
    assert_eq!(header.lines().next().unwrap(), "iteration,objective,error,gradnorm,pivot_i,pivot_j");
    assert!(recon.exists());

    for cmd in ["hosvd", "hooi"] {
        let out = antisym(&[cmd, "--input", path(&a), "--rank", "5"]);
        assert!(out.status.success());
        assert!(json(&out)["error"].as_f64().unwrap() > 0.0);
    }
    let out = antisym(&["rankd", "--input", path(&a)]);
    assert!(json(&out)["alpha"].as_f64().is_some());
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    antisym(&["gen", "function", "--n", "6", "--d", "3", "--output", path(&a)]);
    assert_eq!(antisym(&["jacobi", "--input", path(&a), "--rank", "9"]).status.code(), Some(2));
    assert_eq!(antisym(&["hooi", "--input", "/nonexistent/file", "--rank", "2"]).status.code(), Some(2));
    assert_eq!(antisym(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(antisym(&["gen", "function", "--n", "6", "--d", "5", "--output", path(&a)]).status.code(), Some(2));
}

#[test]
fn strict_mode_reports_non_convergence() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    antisym(&["gen", "random", "--n", "8", "--d", "3", "--output", path(&a)]);
    let args = ["hooi", "--input", path(&a), "--rank", "5", "--max-iters", "1"];
    assert_eq!(antisym(&args).status.code(), Some(0));
    let mut strict = vec!["--strict"];
    strict.extend(args);
    let out = antisym(&strict);
    assert_eq!(out.status.code(), Some(3));
    assert!(json(&out)["status"] == "max-iterations");
}

#[test]
fn experiment_and_init_comparison() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let out_dir = dir.path().join("run");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"family":"random-batch","algorithms":["hosvd","jacobi"],"n":7,"d":3,"r":5,"trials":3,"seed_base":1,"output_dir":"{}"}}"#,
            out_dir.display()
        ),
    )
    .unwrap();
    let out = antisym(&["experiment", "--config", path(&cfg)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let s = json(&out);
    assert_eq!(s["algorithms"]["jacobi"]["runs"], 3);
    assert!(s["algorithms"]["jacobi"]["error_quantiles"]["median"].as_f64().is_some());
    let trials = std::fs::read_to_string(out_dir.join("trials.csv")).unwrap();
    assert_eq!(trials.lines().next().unwrap(), "trial,algorithm,error,gradnorm,iterations,wall_time,status");
    assert_eq!(trials.lines().count(), 7);
    assert!(out_dir.join("traces/trial0002_jacobi.csv").exists());

    let csv = antisym(&["--format", "csv", "experiment", "--config", path(&cfg)]);
    assert!(String::from_utf8_lossy(&csv.stdout).starts_with("trial,algorithm,"));

    std::fs::write(&cfg, r#"{"family":"random-batch","algorithms":["jacobi"],"n":7,"d":3,"r":5,"trials":0}"#).unwrap();
    let out = antisym(&["experiment", "--config", path(&cfg)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["algorithms"]["jacobi"]["runs"], 0);

    std::fs::write(&cfg, r#"{"family":"random-batch","algorithms":["jacobi"],"n":7,"d":3,"r":4,"trials":2}"#).unwrap();
    assert_eq!(antisym(&["experiment", "--config", path(&cfg)]).status.code(), Some(2));

    let t = dir.path().join("t4.txt");
    antisym(&["gen", "function", "--n", "6", "--d", "4", "--output", path(&t)]);
    let cmp_dir = dir.path().join("cmp");
    let out = antisym(&["compare-inits", "--input", path(&t), "--output-dir", path(&cmp_dir)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let s = json(&out);
    let (e1, e2) = (s["error_hosvd"].as_f64().unwrap(), s["error_kofidis"].as_f64().unwrap());
    assert!((e1 - e2).abs() <= 1e-6 * e1.max(e2));
    assert!(cmp_dir.join("aligned.csv").exists());
}

#[test]
fn ground_state_generation() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    let out = antisym(&["gen", "groundstate", "--n", "8", "--d", "3", "--output", path(&g)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let s = json(&out);
    assert!(s["eigenvalue"].as_f64().unwrap() < 0.0);
    assert!(s["residual"].as_f64().unwrap() <= 1e-8);
}
