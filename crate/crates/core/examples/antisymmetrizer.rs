//! The antisymmetrizer and the sign structure of matricizations.
//!
//! `cargo run --example antisymmetrizer`

use antisym::matricize::matricize;
use antisym::tensor::{antisymmetrize, antisymmetrize_by_permutations, is_antisymmetric, DenseTensor};

fn main() -> antisym::Result<()> {
    let x = DenseTensor::from_fn(&[4, 4, 4], |i| ((1 + i[0]) * (1 + i[1]).pow(2) * (2 + i[2]).pow(3)) as f64);
    let a = antisymmetrize(&x)?;
    let b = antisymmetrize_by_permutations(&x)?;
    println!("orbit vs permutation sum: {:.2e}", a.sub(&b)?.frobenius_norm());
    println!("antisymmetric: {}", is_antisymmetric(&a, 1e-12));
    println!("A(0,1,2) = {:+.6}, A(1,0,2) = {:+.6}, A(0,0,2) = {}", a.get(&[0, 1, 2]), a.get(&[1, 0, 2]), a.get(&[0, 0, 2]));
    println!("idempotent: {:.2e}", antisymmetrize(&a)?.sub(&a)?.frobenius_norm());

    // All matricizations agree up to the sign (-1)^(mu - nu).
    let m0 = matricize(&a, 0)?.matrix;
    for mu in 1..3 {
        let m = matricize(&a, mu)?.matrix;
        let sign = if mu % 2 == 0 { 1.0 } else { -1.0 };
        println!("A_({}) - ({sign:+}) A_(1): {:.2e}", mu + 1, (&m - &m0 * sign).norm());
    }
    Ok(())
}
