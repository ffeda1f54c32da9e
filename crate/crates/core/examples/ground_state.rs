//! Antisymmetric ground state of a discretized three-particle Hamiltonian
//! and its low multilinear rank approximation.
//!
//! `cargo run --release --example ground_state [n]`

use antisym::approx::{jacobi, thosvd, JacobiOptions};
use antisym::problems::{antisym_ground_state, GroundStateOptions, HamiltonianSpec};
use antisym::tensor::is_antisymmetric;

fn main() -> antisym::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let spec = HamiltonianSpec::new(3, n);
    let g = antisym_ground_state(&spec, &GroundStateOptions::default())?;
    println!(
        "n = {n}: eigenvalue {:.8}, residual {:.2e}, {} operator applications, antisymmetric: {}",
        g.eigenvalue,
        g.residual,
        g.applies,
        is_antisymmetric(&g.eigentensor, 1e-10)
    );
    for r in [3, 5, 7, 9] {
        let h = thosvd(&g.eigentensor, r)?;
        let j = jacobi(&g.eigentensor, r, &JacobiOptions::default())?;
        println!("r = {r}: HOSVD error {:.3e}, Jacobi error {:.3e} ({:?})", h.error, j.approx.error, j.status);
    }
    Ok(())
}
