//! Multilinear ranks of antisymmetric tensors: the extremal constructions
//! and the set of attainable ranks.
//!
//! `cargo run --example rank_constructions`

use antisym::problems::random_antisymmetric;
use antisym::rank::{admissible_rank, border_with_zeros, construct_rank_d, construct_rank_n, multilinear_rank};

fn main() -> antisym::Result<()> {
    for d in [3, 4] {
        let a = construct_rank_d(d)?;
        let bordered = border_with_zeros(&a, d + 3)?;
        println!(
            "d = {d}: rank-d tensor has rank {}, bordered to n = {} still {}",
            multilinear_rank(&a, None)?.rank,
            d + 3,
            multilinear_rank(&bordered, None)?.rank
        );
    }
    for (n, d) in [(5, 3), (6, 3), (6, 4), (8, 4)] {
        println!("construct_rank_n({n}, {d}) has rank {}", multilinear_rank(&construct_rank_n(n, d)?, None)?.rank);
    }
    // A generic tensor with n = d + 1 only reaches rank d.
    let a = random_antisymmetric(4, 3, 1);
    println!("random 4x4x4: rank {}", multilinear_rank(&a, None)?.rank);

    let n = 8;
    for d in 2..=5 {
        let ranks: Vec<usize> = (0..=n).filter(|&r| admissible_rank(n, d, r)).collect();
        println!("n = {n}, d = {d}: attainable ranks {ranks:?}");
    }
    Ok(())
}
