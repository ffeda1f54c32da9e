//! Convergence histories of HOOI and Jacobi for the function-related tensor,
//! with HOSVD and identity starts, written as CSV.
//!
//! `cargo run --release --example convergence_traces [output_dir]`

use std::path::PathBuf;

use antisym::approx::{hooi, jacobi, FactorInit, HooiOptions, JacobiInit, JacobiOptions};
use antisym::problems::function_tensor;

fn main() -> antisym::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "traces".into()));
    std::fs::create_dir_all(&dir)?;
    let a = function_tensor(20, 3)?;
    let r = 7;
    for (name, init) in [("hosvd", FactorInit::Hosvd), ("identity", FactorInit::Identity)] {
        let h = hooi(&a, r, &HooiOptions { init, ..Default::default() })?;
        h.trace.save_csv(dir.join(format!("hooi_{name}.csv")))?;
        let j = jacobi(&a, r, &JacobiOptions { init: JacobiInit::from(init), ..Default::default() })?;
        j.trace().save_csv(dir.join(format!("jacobi_{name}.csv")))?;
        println!(
            "{name:>8} start: HOOI {:?} after {} sweeps (error {:.3e}), Jacobi {:?} after {} rotations (error {:.3e})",
            h.status, h.iterations, h.approx.error, j.status, j.rotations, j.approx.error
        );
    }
    println!("traces written to {}", dir.display());
    Ok(())
}
