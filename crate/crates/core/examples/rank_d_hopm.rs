//! Rank-d approximation through the higher-order power method, the
//! eigenvector start for order 4, and stacking mutually orthogonal factors.
//!
//! `cargo run --release --example rank_d_hopm`

use antisym::approx::{jacobi, JacobiOptions};
use antisym::experiment::compare_inits;
use antisym::problems::{function_tensor, random_antisymmetric};
use antisym::rank_d::{core_coefficient, hopm, orthogonal_hooi, rank1_to_antisymmetric, stack_factors, HopmOptions};

fn main() -> antisym::Result<()> {
    let a = random_antisymmetric(8, 3, 3);
    let r1 = hopm(&a, &HopmOptions::default())?;
    let t = rank1_to_antisymmetric(&a, &r1)?;
    println!(
        "HOPM: {:?} after {} sweeps, |alpha| = {:.6}, |S| / |alpha| = {:.6} (sqrt(3!) = {:.6})",
        r1.status,
        r1.iterations,
        r1.alpha.abs(),
        t.objective / r1.alpha.abs(),
        6f64.sqrt()
    );
    println!("core coefficient {:.6}, rank-3 error {:.6}", core_coefficient(&t.core), t.error);
    let j = jacobi(&a, 3, &JacobiOptions::default())?;
    println!("Jacobi with r = 3: error {:.6}", j.approx.error);

    for (label, b) in [("random 10^4", random_antisymmetric(10, 4, 1)), ("function n=10", function_tensor(10, 4)?)] {
        let c = compare_inits(&b, 1e-10, 1000)?;
        println!(
            "{label}: HOSVD start {} sweeps (error {:.6e}), eigenvector start {} sweeps (error {:.6e})",
            c.hosvd.iterations, c.errors.0, c.kofidis.iterations, c.errors.1
        );
    }

    let b = random_antisymmetric(10, 3, 7);
    let o = orthogonal_hooi(&b, &[2, 2, 2], 500, 1e-13)?;
    let stacked = stack_factors(&b, &o.factors)?;
    let j6 = jacobi(&b, 6, &JacobiOptions::default())?;
    println!("stacked rank-(2,2,2) factors: error {:.6}; Jacobi r = 6: {:.6}", stacked.error, j6.approx.error);
    Ok(())
}
