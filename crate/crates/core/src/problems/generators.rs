use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tensor::{antisymmetrize, DenseTensor};

/// Antisymmetrized tensor with i.i.d. `U[0, 1)` entries drawn from
/// `ChaCha8Rng::seed_from_u64(seed)` in storage order (first index fastest).
///
/// Returns the zero tensor when `n < d`, and the raw tensor for `d < 2`.
pub fn random_antisymmetric(n: usize, d: usize, seed: u64) -> DenseTensor {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dims = vec![n; d];
    let x = DenseTensor::from_fn(&dims, |_| rng.gen::<f64>());
    if d < 2 {
        return x;
    }
    if n < d {
        return DenseTensor::zeros(&dims);
    }
    antisymmetrize(&x).expect("cubic tensor of order >= 2")
}

/// Antisymmetrized samples of `f(x) = exp(−(Σ_k (k+1)·x_k²)^{1/2})` on the grid
/// `ξ_i = i/(n−1)`, `i = 0, …, n−1`, for `d ∈ {3, 4}`.
pub fn function_tensor(n: usize, d: usize) -> Result<DenseTensor> {
    if !(d == 3 || d == 4) {
        return Err(Error::InvalidParameter(format!("function tensor needs d in {{3, 4}}, got {d}")));
    }
    if n < 2 {
        return Err(Error::InvalidShape(format!("function tensor needs n >= 2, got {n}")));
    }
    let h = 1.0 / (n - 1) as f64;
    let x = DenseTensor::from_fn(&vec![n; d], |idx| {
        let s: f64 = idx
            .iter()
            .enumerate()
            .map(|(k, &i)| (k + 1) as f64 * (i as f64 * h).powi(2))
            .sum();
        (-s.sqrt()).exp()
    });
    antisymmetrize(&x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::singular_values;
    use crate::matricize::matricize;
    use crate::tensor::is_antisymmetric;

    #[test]
    fn random_is_deterministic_and_antisymmetric() {
        let a = random_antisymmetric(6, 3, 9);
        let b = random_antisymmetric(6, 3, 9);
        assert_eq!(a.data(), b.data());
        assert!(is_antisymmetric(&a, 1e-12));
        assert_ne!(a.data(), random_antisymmetric(6, 3, 10).data());
        assert_eq!(random_antisymmetric(2, 3, 1).max_abs(), 0.0);
    }

    #[test]
    fn function_tensor_properties() {
        let a = function_tensor(20, 3).unwrap();
        assert_eq!(a.get(&[0, 0, 0]), 0.0);
        assert!(a.frobenius_norm() > 0.0);
        assert!(is_antisymmetric(&a, 1e-12));
        let s = singular_values(&matricize(&a, 0).unwrap().matrix);
        assert!(s[9] / s[0] <= 1e-3, "sigma_10/sigma_1 = {}", s[9] / s[0]);
        assert!(function_tensor(5, 2).is_err());
        assert!(function_tensor(1, 3).is_err());
    }
}
