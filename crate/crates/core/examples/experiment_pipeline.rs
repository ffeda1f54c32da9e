//! A batch experiment driven by a JSON config, as used by the CLI's
//! `experiment` subcommand.
//!
//! `cargo run --release --example experiment_pipeline [output_dir]`

use antisym::experiment::{run_experiment, ExperimentConfig};

fn main() -> antisym::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "experiment_out".into());
    let config = format!(
        r#"{{
            "family": "random-batch",
            "algorithms": ["hosvd", "hooi", "jacobi"],
            "n": 10, "d": 3, "r": 6,
            "trials": 8,
            "seed_base": 100,
            "output_dir": "{out}"
        }}"#
    );
    let cfg = ExperimentConfig::from_json(&config)?;
    let summary = run_experiment(&cfg)?;
    for (alg, s) in &summary.algorithms {
        let q = s.error_quantiles.expect("nonempty batch");
        println!(
            "{alg:>7}: median error {:.6} (min {:.6}, max {:.6}), {}/{} converged",
            q.median, q.min, q.max, s.converged, s.runs
        );
    }
    println!("trials.csv, summary.json and traces/ written to {out}");
    Ok(())
}
