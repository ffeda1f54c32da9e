//! Truncated HOSVD: exact on tensors of low multilinear rank and
//! quasi-optimal otherwise.
//!
//! `cargo run --example truncated_hosvd`

use antisym::approx::thosvd;
use antisym::problems::random_antisymmetric;
use antisym::rank::{border_with_zeros, construct_rank_n};
use antisym::tensor::is_antisymmetric;

fn main() -> antisym::Result<()> {
    let exact = border_with_zeros(&construct_rank_n(6, 3)?, 10)?;
    let t = thosvd(&exact, 6)?;
    println!("exact rank 6: relative error {:.2e}", t.error / exact.frobenius_norm());

    let a = random_antisymmetric(10, 3, 42);
    for r in [3, 5, 6, 8, 10] {
        let t = thosvd(&a, r)?;
        println!(
            "r = {r:2}: error {:.6}, |S| = {:.6}, core antisymmetric: {}",
            t.error,
            t.objective,
            is_antisymmetric(&t.core, 1e-12)
        );
    }
    Ok(())
}
