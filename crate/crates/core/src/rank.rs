//! Multilinear rank of antisymmetric tensors and tensors attaining the
//! admissible ranks.
//!
//! All matricizations of an antisymmetric tensor agree up to sign, so its
//! multilinear rank is a single integer `r`. For order `d ≥ 3` the attainable
//! values are `r = 0`, `r = d` and `d + 2 ≤ r ≤ n`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::singular_values;
use crate::matricize::matricize;
use crate::tensor::{permutations_with_sign, require_antisymmetric, DenseTensor};

/// Numerical rank of a matricization.
#[derive(Debug, Clone, Serialize)]
pub struct RankReport {
    pub rank: usize,
    pub singular_values: Vec<f64>,
    pub tolerance_used: f64,
}

fn rank_of_mode(x: &DenseTensor, mu: usize, tol: Option<f64>) -> Result<RankReport> {
    let m = matricize(x, mu)?.matrix;
    let s = singular_values(&m);
    let sigma_max = s.first().copied().unwrap_or(0.0);
    let tolerance_used =
        tol.unwrap_or_else(|| m.nrows().max(m.ncols()) as f64 * f64::EPSILON * sigma_max);
    let rank = s.iter().filter(|&&v| v > tolerance_used).count();
    Ok(RankReport {
        rank,
        singular_values: s,
        tolerance_used,
    })
}

/// Multilinear rank of an antisymmetric tensor from the singular values of
/// its mode-1 matricization. The default tolerance is
/// `max(rows, cols)·ε·σ₁`.
pub fn multilinear_rank(a: &DenseTensor, tol: Option<f64>) -> Result<RankReport> {
    require_antisymmetric(a)?;
    rank_of_mode(a, 0, tol)
}

/// Per-mode numerical ranks of a general tensor.
pub fn per_mode_ranks(x: &DenseTensor, tol: Option<f64>) -> Result<Vec<RankReport>> {
    (0..x.order()).map(|mu| rank_of_mode(x, mu, tol)).collect()
}

/// `d^{⊗d}` tensor with `A(π(1),…,π(d)) = sign(π)` and zeros elsewhere; its
/// multilinear rank is exactly `d`.
pub fn construct_rank_d(d: usize) -> Result<DenseTensor> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("order must be at least 2, got {d}")));
    }
    let mut a = DenseTensor::cube(d, d);
    for (p, sign) in permutations_with_sign(d) {
        a.set(&p, sign);
    }
    Ok(a)
}

/// Antisymmetric `n^{⊗d}` tensor of multilinear rank `n`, for `n ≥ d + 2`.
///
/// With the cyclic index list `h = (1, …, n, 1, …, d−1)`, the generating
/// tensor is `−d!` at each window `(h_k, …, h_{k+d−1})`, `k = 1..n`. The
/// windows lie in distinct orbits, so antisymmetrizing gives entries
/// `−sign(π)` on the permutations of each window; those are written directly.
pub fn construct_rank_n(n: usize, d: usize) -> Result<DenseTensor> {
    if d < 3 || n < d + 2 {
        return Err(Error::InvalidParameter(format!(
            "rank-n construction needs d >= 3 and n >= d + 2, got n = {n}, d = {d}"
        )));
    }
    let perms = permutations_with_sign(d);
    let mut a = DenseTensor::cube(n, d);
    let mut idx = vec![0usize; d];
    for k in 0..n {
        let window: Vec<usize> = (0..d).map(|t| (k + t) % n).collect();
        for (p, sign) in &perms {
            for (slot, &q) in idx.iter_mut().zip(p) {
                *slot = window[q];
            }
            a.set(&idx, -sign);
        }
    }
    Ok(a)
}

/// Embeds `a` into an `n_new^{⊗d}` tensor padded with zeros.
pub fn border_with_zeros(a: &DenseTensor, n_new: usize) -> Result<DenseTensor> {
    let n = a.require_cubic()?;
    if n_new < n {
        return Err(Error::InvalidShape(format!("cannot border size {n} down to {n_new}")));
    }
    let mut out = DenseTensor::cube(n_new, a.order());
    let mut idx = vec![0usize; a.order()];
    for &v in a.data() {
        out.set(&idx, v);
        crate::tensor::increment(&mut idx, a.dims());
    }
    Ok(out)
}

/// Whether an `n^{⊗d}` antisymmetric tensor can have multilinear rank `r`.
/// Order 2 (skew-symmetric matrices) allows even ranks up to `n`.
pub fn admissible_rank(n: usize, d: usize, r: usize) -> bool {
    match d {
        0 => false,
        1 => r <= n.min(1),
        2 => r.is_multiple_of(2) && r <= n,
        _ => r == 0 || (r == d && d <= n) || (r >= d + 2 && r <= n),
    }
}
