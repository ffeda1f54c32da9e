//! Higher-order orthogonal iteration with antisymmetrizing post-processing.
//!
//! HOOI maximizes the unstructured objective `‖A ×₁ U₁ᵀ ⋯ ×_d U_dᵀ‖` by
//! alternating SVD updates of one factor at a time. Its iterates are not
//! antisymmetric; the final approximation reuses the single factor `U_μ`
//! that gives the largest value of `‖A ×₁ U_μᵀ ⋯ ×_d U_μᵀ‖` in every mode.

use nalgebra::DMatrix;

use super::hosvd::{check_rank, hosvd_factor};
use super::trace::{ConvergenceTrace, SolverStatus};
use super::TuckerApprox;
use crate::error::{Error, Result};
use crate::linalg::svd_leading;
use crate::matricize::matricize;
use crate::tensor::{mode_product, require_antisymmetric, DenseTensor};

/// Starting factor for HOOI and the Jacobi algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FactorInit {
    /// Truncated HOSVD factor.
    #[default]
    Hosvd,
    /// `U = [I_r; 0]`.
    Identity,
}

#[derive(Debug, Clone)]
pub struct HooiOptions {
    pub max_iters: usize,
    pub grad_tol: f64,
    pub init: FactorInit,
    /// Relative objective change per sweep below which a sweep counts as
    /// stagnant (only when the gradient is not decreasing either).
    pub stagnation_tol: f64,
}

impl Default for HooiOptions {
    fn default() -> Self {
        Self {
            max_iters: 1000,
            grad_tol: 1e-10,
            init: FactorInit::Hosvd,
            stagnation_tol: 1e-14,
        }
    }
}

#[derive(Debug, Clone)]
pub struct HooiResult {
    /// Unstructured factors `U₁, …, U_d`.
    pub factors: Vec<DMatrix<f64>>,
    /// Antisymmetric approximation built from the best single factor.
    pub approx: TuckerApprox,
    /// Mode whose factor was selected for `approx`.
    pub chosen_mode: usize,
    /// Unstructured objective `‖A ×₁ U₁ᵀ ⋯ ×_d U_dᵀ‖` at the end.
    pub objective: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
    pub status: SolverStatus,
    pub trace: ConvergenceTrace,
    /// Objective after every single-mode update, starting with the initial
    /// value.
    pub update_objectives: Vec<f64>,
}

pub(crate) fn identity_factor(n: usize, r: usize) -> DMatrix<f64> {
    DMatrix::identity(n, r)
}

/// `A ×_{ν≠skip} U_νᵀ`; pass `skip = None` to contract every mode.
pub(crate) fn partial_projection(
    a: &DenseTensor,
    factors: &[DMatrix<f64>],
    skip: Option<usize>,
) -> Result<DenseTensor> {
    let mut t = a.clone();
    for (mu, u) in factors.iter().enumerate() {
        if Some(mu) != skip {
            t = mode_product(&t, &u.transpose(), mu)?;
        }
    }
    Ok(t)
}

/// Norm of the Riemannian gradient of `‖A ×₁ U₁ᵀ ⋯ ×_d U_dᵀ‖²` on the
/// product of Stiefel manifolds:
/// `(Σ_μ ‖2·(I − U_μU_μᵀ)·T_(μ)T_(μ)ᵀ·U_μ‖²)^{1/2}` with
/// `T = A ×_{ν≠μ} U_νᵀ`.
pub fn hooi_gradient(a: &DenseTensor, factors: &[DMatrix<f64>]) -> Result<f64> {
    if factors.len() != a.order() {
        return Err(Error::InvalidShape(format!(
            "need {} factors, got {}",
            a.order(),
            factors.len()
        )));
    }
    let mut total = 0.0;
    for (mu, u) in factors.iter().enumerate() {
        let t = matricize(&partial_projection(a, factors, Some(mu))?, mu)?.matrix;
        let tu = t.transpose() * u;
        let w = &t * tu;
        let proj = &w - u * (u.transpose() * &w);
        total += 4.0 * proj.norm_squared();
    }
    Ok(total.sqrt())
}

fn error_from_objective(norm_a: f64, objective: f64) -> f64 {
    (norm_a * norm_a - objective * objective).max(0.0).sqrt()
}

/// HOOI for multilinear rank-`(r, …, r)` approximation of an antisymmetric
/// tensor. Non-convergence is reported through [`HooiResult::status`].
pub fn hooi(a: &DenseTensor, r: usize, opts: &HooiOptions) -> Result<HooiResult> {
    let n = require_antisymmetric(a)?;
    check_rank(n, r)?;
    let d = a.order();
    let init = match opts.init {
        FactorInit::Hosvd => hosvd_factor(a, r)?,
        FactorInit::Identity => identity_factor(n, r),
    };
    let mut factors = vec![init; d];
    let norm_a = a.frobenius_norm();

    let mut objective = partial_projection(a, &factors, None)?.frobenius_norm();
    let mut grad = hooi_gradient(a, &factors)?;
    let mut trace = ConvergenceTrace::default();
    trace.push(0, objective, error_from_objective(norm_a, objective), grad);
    let mut update_objectives = vec![objective];

    let mut iterations = 0;
    let status = loop {
        if grad <= opts.grad_tol {
            break SolverStatus::Converged;
        }
        if iterations >= opts.max_iters {
            break SolverStatus::MaxIterations;
        }
        let before = (objective, grad);
        for mu in 0..d {
            let t = matricize(&partial_projection(a, &factors, Some(mu))?, mu)?.matrix;
            let svd = svd_leading(&t, r)?;
            factors[mu] = svd.u;
            objective = svd.s.iter().map(|s| s * s).sum::<f64>().sqrt();
            update_objectives.push(objective);
        }
        iterations += 1;
        grad = hooi_gradient(a, &factors)?;
        trace.push(iterations, objective, error_from_objective(norm_a, objective), grad);
        let rel_change = (objective - before.0).abs() / objective.max(f64::MIN_POSITIVE);
        if grad > opts.grad_tol && rel_change < opts.stagnation_tol && grad >= 0.999 * before.1 {
            break SolverStatus::Stagnated;
        }
    };

    let mut best: Option<(usize, TuckerApprox)> = None;
    for (mu, u) in factors.iter().enumerate() {
        let cand = TuckerApprox::from_factor(a, u.clone())?;
        if best.as_ref().is_none_or(|(_, b)| cand.objective > b.objective) {
            best = Some((mu, cand));
        }
    }
    let (chosen_mode, approx) = best.expect("order is at least 2");

    Ok(HooiResult {
        factors,
        approx,
        chosen_mode,
        objective,
        gradient_norm: grad,
        iterations,
        status,
        trace,
        update_objectives,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::thosvd;
    use crate::rank::{border_with_zeros, construct_rank_d};
    use crate::tensor::antisymmetrize;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_antisym(n: usize, d: usize, seed: u64) -> DenseTensor {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        antisymmetrize(&DenseTensor::from_fn(&vec![n; d], |_| rng.gen())).unwrap()
    }

    #[test]
    fn exact_input_converges_immediately() {
        let a = border_with_zeros(&construct_rank_d(3).unwrap(), 6).unwrap();
        let res = hooi(&a, 3, &HooiOptions::default()).unwrap();
        assert_eq!(res.iterations, 0);
        assert_eq!(res.status, SolverStatus::Converged);
        assert!(res.approx.error <= 1e-10 * a.frobenius_norm());
    }

    #[test]
    fn monotone_and_improves_on_hosvd() {
        for (seed, r) in [(1, 3), (2, 6)] {
            let a = random_antisym(8, 3, seed);
            let res = hooi(&a, r, &HooiOptions::default()).unwrap();
            assert!(res
                .update_objectives
                .windows(2)
                .all(|w| w[1] >= w[0] - 1e-12 * w[0]));
            assert!(res.trace.objective_nondecreasing(1e-12));
            let h = thosvd(&a, r).unwrap();
            assert!(res.approx.error <= h.error + 1e-12);
        }
    }

    #[test]
    fn gradient_vanishes_at_exact_decomposition() {
        let a = border_with_zeros(&construct_rank_d(3).unwrap(), 5).unwrap();
        let u = hosvd_factor(&a, 3).unwrap();
        assert!(hooi_gradient(&a, &[u.clone(), u.clone(), u]).unwrap() < 1e-10);
    }
}
