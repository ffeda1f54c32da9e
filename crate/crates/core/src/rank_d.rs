//! Antisymmetric multilinear rank-`d` approximation through an unstructured
//! rank-1 approximation.
//!
//! For orthonormal `U = [u₁, …, u_d]` the projected core `A ×₁ Uᵀ ⋯ ×_d Uᵀ`
//! is a multiple of the antisymmetrized `e₁ ⊗ ⋯ ⊗ e_d`, so maximizing its
//! norm is the same as maximizing `|A ×₁ u₁ᵀ ⋯ ×_d u_dᵀ|`. The higher-order
//! power method (HOPM) drives that maximization, and by the skew identity
//! `A ×_μ u ×_ν u = 0` its updates keep the vectors mutually orthogonal.

use log::warn;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::approx::{check_rank, hosvd_factor, partial_projection, ConvergenceTrace, SolverStatus, TuckerApprox};
use crate::error::{Error, Result};
use crate::linalg::{orthogonalize, orthonormality_defect, orthonormalize, svd_leading, sym_eig};
use crate::matricize::{matricize, matricize_12};
use crate::tensor::{contract_all_but, multilinear_form, require_antisymmetric, DenseTensor};

/// Starting vectors for HOPM.
#[derive(Debug, Clone, PartialEq)]
pub enum HopmInit {
    /// Leading `d` left singular vectors of the mode-1 matricization.
    Hosvd,
    /// Eigenvector-based initialization for order-4 tensors
    /// ([`kofidis_init_d4`]).
    Kofidis,
    /// Caller-supplied vectors (normalized on entry, need not be orthogonal).
    Vectors(Vec<DVector<f64>>),
}

impl HopmInit {
    /// Kofidis for `d = 4`, HOSVD otherwise.
    pub fn default_for(d: usize) -> Self {
        if d == 4 {
            HopmInit::Kofidis
        } else {
            HopmInit::Hosvd
        }
    }
}

#[derive(Debug, Clone)]
pub struct HopmOptions {
    /// `None` selects [`HopmInit::default_for`] the tensor order.
    pub init: Option<HopmInit>,
    pub tol: f64,
    pub max_iters: usize,
    /// Gram–Schmidt each updated vector against the other current vectors.
    pub orthogonalize: bool,
    /// Seed for the perturbation applied after a zero contraction.
    pub seed: u64,
    pub max_restarts: usize,
}

impl Default for HopmOptions {
    fn default() -> Self {
        Self {
            init: None,
            tol: 1e-10,
            max_iters: 1000,
            orthogonalize: true,
            seed: 0,
            max_restarts: 3,
        }
    }
}

/// Output of HOPM: `α·u₁ ⊗ ⋯ ⊗ u_d` with `α = A ×₁ u₁ᵀ ⋯ ×_d u_dᵀ`.
///
/// Trace rows record `|α|` as the objective and, as the error, that of the
/// antisymmetric rank-`d` approximation `(‖A‖² − d!·α²)^{1/2}`.
#[derive(Debug, Clone)]
pub struct Rank1Result {
    pub alpha: f64,
    pub vectors: Vec<DVector<f64>>,
    pub status: SolverStatus,
    pub iterations: usize,
    pub gradient_norm: f64,
    pub restarts: usize,
    pub trace: ConvergenceTrace,
}

impl Rank1Result {
    pub fn factor(&self) -> DMatrix<f64> {
        DMatrix::from_columns(&self.vectors)
    }
}

fn factorial(d: usize) -> f64 {
    (1..=d).map(|k| k as f64).product()
}

fn refs(v: &[DVector<f64>]) -> Vec<&DVector<f64>> {
    v.iter().collect()
}

/// `(α, gradient norm)` with the gradient norm
/// `(Σ_μ ‖v_μ − (u_μᵀv_μ)u_μ‖²)^{1/2}`, `v_μ = A ×_{ν≠μ} u_νᵀ`.
fn rank1_state(a: &DenseTensor, u: &[DVector<f64>]) -> Result<(f64, f64)> {
    let r = refs(u);
    let mut g2 = 0.0;
    let mut alpha = 0.0;
    for (mu, um) in u.iter().enumerate() {
        let v = contract_all_but(a, &r, mu)?;
        let c = um.dot(&v);
        if mu == 0 {
            alpha = c;
        }
        g2 += (v - um * c).norm_squared();
    }
    Ok((alpha, g2.sqrt()))
}

/// Norm of the gradient of the rank-1 objective on the product of spheres.
pub fn rank1_gradient(a: &DenseTensor, vectors: &[DVector<f64>]) -> Result<f64> {
    Ok(rank1_state(a, vectors)?.1)
}

fn rank_d_error(norm_a: f64, d: usize, alpha: f64) -> f64 {
    (norm_a * norm_a - factorial(d) * alpha * alpha).max(0.0).sqrt()
}

/// Higher-order power method for the best rank-1 approximation of an
/// antisymmetric tensor.
pub fn hopm(a: &DenseTensor, opts: &HopmOptions) -> Result<Rank1Result> {
    let n = require_antisymmetric(a)?;
    let d = a.order();
    if n < d {
        return Err(Error::InvalidShape(format!(
            "n = {n} < d = {d}: every antisymmetric tensor of this shape is zero"
        )));
    }
    let norm_a = a.frobenius_norm();
    if norm_a == 0.0 {
        let vectors = (0..d).map(|k| canonical(n, k)).collect();
        return Ok(Rank1Result {
            alpha: 0.0,
            vectors,
            status: SolverStatus::ZeroTensor,
            iterations: 0,
            gradient_norm: 0.0,
            restarts: 0,
            trace: ConvergenceTrace::default(),
        });
    }

    let init = opts.init.clone().unwrap_or_else(|| HopmInit::default_for(d));
    let mut u: Vec<DVector<f64>> = match init {
        HopmInit::Hosvd => hosvd_factor(a, d)?.column_iter().map(|c| c.into_owned()).collect(),
        HopmInit::Kofidis => kofidis_init_d4(a)?,
        HopmInit::Vectors(vs) => {
            if vs.len() != d || vs.iter().any(|v| v.len() != n) {
                return Err(Error::InvalidShape(format!("need {d} initial vectors of length {n}")));
            }
            vs.into_iter()
                .map(|v| {
                    let norm = v.norm();
                    if norm == 0.0 {
                        Err(Error::InvalidParameter("zero initial vector".into()))
                    } else {
                        Ok(v / norm)
                    }
                })
                .collect::<Result<_>>()?
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (mut alpha, mut grad) = rank1_state(a, &u)?;
    let mut trace = ConvergenceTrace::default();
    trace.push(0, alpha.abs(), rank_d_error(norm_a, d, alpha), grad);
    let mut iterations = 0;
    let mut restarts = 0;

    let status = 'outer: loop {
        if grad <= opts.tol {
            break SolverStatus::Converged;
        }
        if iterations >= opts.max_iters {
            break SolverStatus::MaxIterations;
        }
        let mut mu = 0;
        while mu < d {
            let v = contract_all_but(a, &refs(&u), mu)?;
            let norm = v.norm();
            if norm <= 1e-14 * norm_a {
                restarts += 1;
                if restarts > opts.max_restarts {
                    break 'outer SolverStatus::Failed;
                }
                warn!("zero contraction in HOPM mode {mu}; perturbing the other vectors");
                for (nu, w) in u.iter_mut().enumerate() {
                    if nu != mu {
                        w.iter_mut().for_each(|x| *x += 1e-8 * rng.gen_range(-1.0..1.0));
                        let nw = w.norm();
                        *w /= nw;
                    }
                }
                continue;
            }
            let mut next = v / norm;
            if opts.orthogonalize {
                let others: Vec<DVector<f64>> =
                    u.iter().enumerate().filter(|(k, _)| *k != mu).map(|(_, w)| w.clone()).collect();
                next = orthogonalize(next, &others);
                let nn = next.norm();
                next /= nn;
            }
            u[mu] = next;
            mu += 1;
        }
        iterations += 1;
        (alpha, grad) = rank1_state(a, &u)?;
        trace.push(iterations, alpha.abs(), rank_d_error(norm_a, d, alpha), grad);
    };

    Ok(Rank1Result {
        alpha,
        vectors: u,
        status,
        iterations,
        gradient_norm: grad,
        restarts,
        trace,
    })
}

fn canonical(n: usize, k: usize) -> DVector<f64> {
    let mut e = DVector::zeros(n);
    e[k % n] = 1.0;
    e
}

/// Re-orthonormalizes `u` if its columns drifted by more than `1e-12`;
/// fails beyond `limit`.
fn ensure_orthonormal(u: DMatrix<f64>, limit: f64) -> Result<DMatrix<f64>> {
    let defect = orthonormality_defect(&u);
    if defect <= 1e-12 {
        Ok(u)
    } else if defect <= limit {
        orthonormalize(&u)
    } else {
        Err(Error::NotOrthonormal(defect))
    }
}

/// Antisymmetric rank-`d` approximation with factor `U = [u₁, …, u_d]` and
/// core obtained by projection.
pub fn rank1_to_antisymmetric(a: &DenseTensor, r1: &Rank1Result) -> Result<TuckerApprox> {
    require_antisymmetric(a)?;
    let u = r1.factor();
    let defect = orthonormality_defect(&u);
    let u = if defect > 1e-8 {
        warn!("rank-1 vectors deviate from orthonormality by {defect:e}; re-orthonormalizing");
        orthonormalize(&u)?
    } else {
        ensure_orthonormal(u, 1e-8)?
    };
    TuckerApprox::from_factor(a, u)
}

/// Coefficient `β` of a rank-`d` core `S = β·e₁∧⋯∧e_d`, i.e. `S(0, 1, …, d−1)`
/// (the core equals `antisym(d!·β·e₁ ⊗ ⋯ ⊗ e_d)`).
pub fn core_coefficient(core: &DenseTensor) -> f64 {
    let idx: Vec<usize> = (0..core.order()).collect();
    core.get(&idx)
}

/// HOPM initialization for order-4 antisymmetric tensors: take the
/// eigenvector of the `(1,2)`-matricization for the eigenvalue of largest
/// magnitude, reshape it to an `n × n` (skew-symmetric) matrix, and return
/// its four leading left singular vectors.
pub fn kofidis_init_d4(a: &DenseTensor) -> Result<Vec<DVector<f64>>> {
    if a.order() != 4 {
        return Err(Error::InvalidShape(format!(
            "initialization needs an order-4 tensor, got order {}",
            a.order()
        )));
    }
    let n = require_antisymmetric(a)?;
    if n < 4 {
        return Err(Error::InvalidShape(format!("n = {n} < 4")));
    }
    if a.frobenius_norm() == 0.0 {
        return Err(Error::InvalidParameter("zero tensor".into()));
    }
    let eig = sym_eig(&matricize_12(a)?.matrix)?;
    let v = eig.vectors.column(0);
    let vmat = DMatrix::from_column_slice(n, n, v.as_slice());
    let svd = svd_leading(&vmat, 4)?;
    Ok(svd.u.column_iter().map(|c| c.into_owned()).collect())
}

/// Antisymmetric approximation with `U = [U₁ | ⋯ | U_d]` from mutually
/// orthogonal blocks; drift up to `1e-8` is repaired by re-orthonormalizing.
pub fn stack_factors(a: &DenseTensor, factors: &[DMatrix<f64>]) -> Result<TuckerApprox> {
    let n = require_antisymmetric(a)?;
    if factors.iter().any(|f| f.nrows() != n) {
        return Err(Error::InvalidShape(format!("every factor needs {n} rows")));
    }
    let cols: Vec<_> = factors.iter().flat_map(|f| f.column_iter()).collect();
    if cols.is_empty() || cols.len() > n {
        return Err(Error::InvalidRank {
            rank: cols.len(),
            reason: format!("stacked rank must lie in 1..={n}"),
        });
    }
    let u = ensure_orthonormal(DMatrix::from_columns(&cols), 1e-8)?;
    TuckerApprox::from_factor(a, u)
}

/// Result of [`orthogonal_hooi`].
#[derive(Debug, Clone)]
pub struct OrthogonalHooiResult {
    pub factors: Vec<DMatrix<f64>>,
    pub objective: f64,
    pub iterations: usize,
    pub trace: ConvergenceTrace,
}

/// HOOI for multilinear rank `(r₁, …, r_d)` in which each factor update is
/// restricted to the orthogonal complement of the other factors, yielding
/// mutually orthogonal `U_μ` suitable for [`stack_factors`].
pub fn orthogonal_hooi(a: &DenseTensor, ranks: &[usize], max_iters: usize, tol: f64) -> Result<OrthogonalHooiResult> {
    let n = require_antisymmetric(a)?;
    let d = a.order();
    if ranks.len() != d {
        return Err(Error::InvalidShape(format!("need {d} ranks, got {}", ranks.len())));
    }
    let total: usize = ranks.iter().sum();
    check_rank(n, total)?;
    if ranks.contains(&0) {
        return Err(Error::InvalidRank {
            rank: 0,
            reason: "every block rank must be positive".into(),
        });
    }
    // Split the leading HOSVD vectors into consecutive blocks.
    let u0 = hosvd_factor(a, total)?;
    let mut factors = Vec::with_capacity(d);
    let mut start = 0;
    for &r in ranks {
        factors.push(u0.columns(start, r).into_owned());
        start += r;
    }

    let mut objective = partial_projection(a, &factors, None)?.frobenius_norm();
    let mut trace = ConvergenceTrace::default();
    let norm_a = a.frobenius_norm();
    let err = |obj: f64| (norm_a * norm_a - obj * obj).max(0.0).sqrt();
    trace.push(0, objective, err(objective), f64::NAN);
    let mut iterations = 0;
    while iterations < max_iters {
        let before = objective;
        for mu in 0..d {
            let t = matricize(&partial_projection(a, &factors, Some(mu))?, mu)?.matrix;
            let mut p = DMatrix::<f64>::identity(n, n);
            for (nu, f) in factors.iter().enumerate() {
                if nu != mu {
                    p -= f * f.transpose();
                }
            }
            let svd = svd_leading(&(p * &t), ranks[mu])?;
            let others: Vec<DVector<f64>> = factors
                .iter()
                .enumerate()
                .filter(|(nu, _)| *nu != mu)
                .flat_map(|(_, f)| f.column_iter().map(|c| c.into_owned()).collect::<Vec<_>>())
                .collect();
            let mut cols = Vec::with_capacity(ranks[mu]);
            for c in svd.u.column_iter() {
                cols.push(c.into_owned());
            }
            let block = orthonormalize(&DMatrix::from_columns(
                &cols.into_iter().map(|c| orthogonalize(c, &others)).collect::<Vec<_>>(),
            ))?;
            objective = (block.transpose() * &t).norm();
            factors[mu] = block;
        }
        iterations += 1;
        trace.push(iterations, objective, err(objective), f64::NAN);
        if (objective - before).abs() <= tol * objective {
            break;
        }
    }
    Ok(OrthogonalHooiResult {
        factors,
        objective,
        iterations,
        trace,
    })
}

/// `|A ×₁ v₁ᵀ ⋯ ×_d v_dᵀ|` for arbitrary vectors.
pub fn rank1_value(a: &DenseTensor, vectors: &[DVector<f64>]) -> Result<f64> {
    Ok(multilinear_form(a, &refs(vectors))?.abs())
}
