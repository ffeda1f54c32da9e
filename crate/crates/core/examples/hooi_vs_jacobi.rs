//! HOSVD, HOOI and the Jacobi algorithm on a batch of random tensors.
//!
//! `cargo run --release --example hooi_vs_jacobi [trials]`

use antisym::approx::{hooi, jacobi, thosvd, HooiOptions, JacobiOptions};
use antisym::problems::random_antisymmetric;

fn main() -> antisym::Result<()> {
    let trials: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    for r in [3, 6] {
        println!("rank {r}:");
        println!("{:>5} {:>10} {:>10} {:>10} {:>10}", "seed", "hosvd", "hooi", "jacobi", "rotations");
        for seed in 0..trials {
            let a = random_antisymmetric(10, 3, seed);
            let h = thosvd(&a, r)?;
            let o = hooi(&a, r, &HooiOptions::default())?;
            let j = jacobi(&a, r, &JacobiOptions::default())?;
            println!(
                "{seed:>5} {:>10.6} {:>10.6} {:>10.6} {:>10}",
                h.error, o.approx.error, j.approx.error, j.rotations
            );
        }
    }
    Ok(())
}
