use nalgebra::DMatrix;

use super::TuckerApprox;
use crate::error::{Error, Result};
use crate::linalg::svd_leading;
use crate::matricize::matricize;
use crate::tensor::{require_antisymmetric, DenseTensor};

pub(crate) fn check_rank(n: usize, r: usize) -> Result<()> {
    if r == 0 || r > n {
        return Err(Error::InvalidRank {
            rank: r,
            reason: format!("need 1 <= r <= n = {n}"),
        });
    }
    Ok(())
}

/// Leading `r` left singular vectors of the mode-1 matricization.
pub fn hosvd_factor(a: &DenseTensor, r: usize) -> Result<DMatrix<f64>> {
    let m = matricize(a, 0)?.matrix;
    Ok(svd_leading(&m, r)?.u)
}

/// Truncated HOSVD. One factor serves every mode, so the core
/// `A ×₁ Uᵀ ⋯ ×_d Uᵀ` is antisymmetric and the error is within `√d` of
/// the best multilinear rank-`r` error.
pub fn thosvd(a: &DenseTensor, r: usize) -> Result<TuckerApprox> {
    let n = require_antisymmetric(a)?;
    check_rank(n, r)?;
    TuckerApprox::from_factor(a, hosvd_factor(a, r)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rank::{border_with_zeros, construct_rank_d};
    use crate::tensor::{antisymmetrize, is_antisymmetric};

    fn pseudo_random(n: usize, d: usize) -> DenseTensor {
        let mut state = 12345u64;
        let x = DenseTensor::from_fn(&vec![n; d], |_| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        });
        antisymmetrize(&x).unwrap()
    }

    #[test]
    fn exact_rank_is_reproduced() {
        let a = border_with_zeros(&construct_rank_d(3).unwrap(), 6).unwrap();
        let t = thosvd(&a, 3).unwrap();
        assert!(t.error <= 1e-10 * a.frobenius_norm());
        assert!(is_antisymmetric(&t.core, 1e-12));
    }

    #[test]
    fn full_rank_is_exact() {
        let a = pseudo_random(6, 3);
        let t = thosvd(&a, 6).unwrap();
        assert!(t.error <= 1e-12 * a.frobenius_norm());
    }

    #[test]
    fn projection_identity() {
        let a = pseudo_random(7, 3);
        let t = thosvd(&a, 4).unwrap();
        let lhs = t.error.powi(2) + t.objective.powi(2);
        let norm2 = a.frobenius_norm().powi(2);
        assert!((lhs - norm2).abs() <= 1e-10 * norm2);
        assert!(is_antisymmetric(&t.core, 1e-12));
    }

    #[test]
    fn rank_out_of_range() {
        let a = pseudo_random(5, 3);
        assert!(matches!(thosvd(&a, 0), Err(Error::InvalidRank { .. })));
        assert!(matches!(thosvd(&a, 6), Err(Error::InvalidRank { .. })));
        let x = DenseTensor::from_fn(&[3, 3, 3], |_| 1.0);
        assert!(matches!(thosvd(&x, 2), Err(Error::NotAntisymmetric { .. })));
    }
}
