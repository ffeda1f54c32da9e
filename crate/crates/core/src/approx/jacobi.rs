//! Structure-preserving Jacobi algorithm.
//!
//! Maximizes `f(Q) = ‖A ×₁ MQᵀ ⋯ ×_d MQᵀ‖²` over orthogonal `Q`, where `M`
//! keeps the leading `r` coordinates. Each step rotates the working tensor
//! `A_k = A ×₁ Q_kᵀ ⋯ ×_d Q_kᵀ` by a Givens rotation on a pivot pair
//! `(i, j)`, `i < r ≤ j`, with the angle that maximizes `f` along that
//! rotation. Every iterate stays antisymmetric.
//!
//! A rotation changes the leading `r^{⊗d}` block only in the `d` slices
//! that carry index `i`. These slices have equal norms and intersect only in
//! entries with a repeated index, which vanish, so
//! `f(φ) = const + d·ψ(φ)` with
//! `ψ(φ) = Σ_p (cos φ·A(i,p) + sin φ·A(j,p))²` over `p ∈ {0..r}^{d−1}`
//! not containing `i`.

use nalgebra::DMatrix;

use super::hooi::FactorInit;
use super::hosvd::{check_rank, hosvd_factor};
use super::trace::{ConvergenceTrace, SolverStatus};
use super::TuckerApprox;
use crate::error::{Error, Result};
use crate::linalg::{orthonormal_completion, orthonormality_defect};
use crate::rotation::{apply_rotation_in_place, Rotation};
use crate::tensor::{antisymmetrize, antisymmetry_defect, mode_product_all, require_antisymmetric, DenseTensor};

/// Starting point of the Jacobi iteration.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum JacobiInit {
    /// `Q = [U, U⊥]` with `U` from the truncated HOSVD.
    #[default]
    Hosvd,
    /// `Q = I`.
    Identity,
    /// Caller-supplied orthogonal `n × n` matrix.
    Orthogonal(DMatrix<f64>),
}

impl From<FactorInit> for JacobiInit {
    fn from(f: FactorInit) -> Self {
        match f {
            FactorInit::Hosvd => JacobiInit::Hosvd,
            FactorInit::Identity => JacobiInit::Identity,
        }
    }
}

#[derive(Debug, Clone)]
pub struct JacobiOptions {
    /// Pivot threshold `ε ∈ (0, 2/n)`; `None` means `1/(10n)`.
    pub eps: Option<f64>,
    pub grad_tol: f64,
    /// Cap on accepted rotations.
    pub max_rotations: usize,
    pub init: JacobiInit,
    /// Re-antisymmetrize the working tensor after this many rotations.
    pub reantisymmetrize_every: usize,
    /// Record the antisymmetry defect and norm of `A_k` after every step.
    pub monitor: bool,
}

impl Default for JacobiOptions {
    fn default() -> Self {
        Self {
            eps: None,
            grad_tol: 1e-10,
            max_rotations: 10_000,
            init: JacobiInit::Hosvd,
            reantisymmetrize_every: 500,
            monitor: false,
        }
    }
}

/// Diagnostics for one accepted rotation.
#[derive(Debug, Clone, Copy)]
pub struct JacobiStep {
    pub pivot: (usize, usize),
    pub angle: f64,
    /// `d·(ψ(φ*) − ψ(0))`.
    pub predicted_increment: f64,
    /// `f` before the rotation, summed over the leading block of `A_k`.
    pub objective_before: f64,
    /// `f` after the rotation, summed over the leading block of `A_{k+1}`.
    pub objective_after: f64,
    /// Filled when [`JacobiOptions::monitor`] is set.
    pub antisymmetry_defect: Option<f64>,
    pub norm: Option<f64>,
}

/// Components `g_ij = ∂f/∂φ` along each pivot rotation, and their 2-norm.
#[derive(Debug, Clone)]
pub struct JacobiGradient {
    pub components: Vec<((usize, usize), f64)>,
    pub norm: f64,
}

/// Pivot pairs `(i, j)` with `i < r ≤ j < n`, row-major.
pub fn pivot_pairs(n: usize, r: usize) -> Vec<(usize, usize)> {
    (0..r).flat_map(|i| (r..n).map(move |j| (i, j))).collect()
}

/// Precomputed multi-indices `p ∈ {0..r}^{d−1}` as offsets into the
/// trailing modes of the working tensor.
struct BlockIndex {
    n: usize,
    d: usize,
    r: usize,
    tails: Vec<(usize, Vec<usize>)>,
}

impl BlockIndex {
    fn new(n: usize, d: usize, r: usize) -> Self {
        let count = r.pow((d - 1) as u32);
        let mut tails = Vec::with_capacity(count);
        let mut p = vec![0usize; d - 1];
        for _ in 0..count {
            let mut off = 0;
            let mut stride = n;
            for &q in &p {
                off += q * stride;
                stride *= n;
            }
            tails.push((off, p.clone()));
            crate::tensor::increment(&mut p, &vec![r; d - 1]);
        }
        Self { n, d, r, tails }
    }

    /// `(α₁, α₂, α₃)` for the pair `(i, j)`.
    fn alphas(&self, a: &DenseTensor, i: usize, j: usize) -> (f64, f64, f64) {
        let data = a.data();
        let (mut a1, mut a2, mut a3) = (0.0, 0.0, 0.0);
        for (off, p) in &self.tails {
            if p.contains(&i) {
                continue;
            }
            let (x, y) = (data[i + off], data[j + off]);
            a1 += x * x;
            a2 += x * y;
            a3 += y * y;
        }
        (a1, a2, a3)
    }

    fn alpha2(&self, a: &DenseTensor, i: usize, j: usize) -> f64 {
        let data = a.data();
        self.tails
            .iter()
            .filter(|(_, p)| !p.contains(&i))
            .map(|(off, _)| data[i + off] * data[j + off])
            .sum()
    }

    /// `f = ‖A(0..r, …, 0..r)‖²`.
    fn block_norm_sq(&self, a: &DenseTensor) -> f64 {
        let data = a.data();
        self.tails
            .iter()
            .map(|(off, _)| (0..self.r).map(|i| data[i + off].powi(2)).sum::<f64>())
            .sum()
    }

    fn gradient(&self, a: &DenseTensor) -> JacobiGradient {
        let scale = 2.0 * self.d as f64;
        let components: Vec<_> = pivot_pairs(self.n, self.r)
            .into_iter()
            .map(|(i, j)| ((i, j), scale * self.alpha2(a, i, j)))
            .collect();
        let norm = components.iter().map(|(_, g)| g * g).sum::<f64>().sqrt();
        JacobiGradient { components, norm }
    }
}

/// Gradient of `f` at `Q = I` for the working tensor `a_k`:
/// `g_ij = 2d·α₂(i, j)` for every pivot pair. Rotations inside the leading
/// block or inside the trailing block leave `f` unchanged, so these
/// components make up the whole gradient.
pub fn jacobi_gradient(a_k: &DenseTensor, r: usize) -> Result<JacobiGradient> {
    let n = a_k.require_cubic()?;
    check_rank(n, r)?;
    Ok(BlockIndex::new(n, a_k.order(), r).gradient(a_k))
}

/// `f` at `Q = I` for the working tensor `a_k`.
pub fn jacobi_objective(a_k: &DenseTensor, r: usize) -> Result<f64> {
    let n = a_k.require_cubic()?;
    check_rank(n, r)?;
    Ok(BlockIndex::new(n, a_k.order(), r).block_norm_sq(a_k))
}

/// `ψ(φ) = α₁cos²φ + 2α₂ sinφ cosφ + α₃ sin²φ`.
pub fn psi(alpha1: f64, alpha2: f64, alpha3: f64, phi: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    alpha1 * c * c + 2.0 * alpha2 * s * c + alpha3 * s * s
}

/// Angle in `[0, π)` maximizing `ψ`. The stationary points satisfy
/// `α₂t² + (α₁ − α₃)t − α₂ = 0` with `t = tan φ`; the two roots are
/// computed with the cancellation-free formula and the better one is kept.
pub fn optimal_angle(alpha1: f64, alpha2: f64, alpha3: f64) -> f64 {
    use std::f64::consts::{FRAC_PI_2, PI};
    if alpha2 == 0.0 || alpha2.abs() <= 1e-15 * (alpha1 + alpha3) {
        return if alpha3 > alpha1 { FRAC_PI_2 } else { 0.0 };
    }
    let b = alpha1 - alpha3;
    let disc = (b * b + 4.0 * alpha2 * alpha2).sqrt();
    let q = -0.5 * (b + if b >= 0.0 { disc } else { -disc });
    let roots = [q / alpha2, -alpha2 / q];
    let phi = roots
        .iter()
        .map(|t| {
            let phi = t.atan();
            if phi < 0.0 { phi + PI } else { phi }
        })
        .max_by(|x, y| psi(alpha1, alpha2, alpha3, *x).total_cmp(&psi(alpha1, alpha2, alpha3, *y)))
        .expect("two roots");
    if phi >= PI { 0.0 } else { phi }
}

/// Mutable state of a Jacobi run.
#[derive(Debug, Clone)]
pub struct JacobiState {
    /// Accumulated orthogonal matrix `Q_k`.
    pub q: DMatrix<f64>,
    /// Working tensor `A ×₁ Q_kᵀ ⋯ ×_d Q_kᵀ`.
    pub a_k: DenseTensor,
    pub r: usize,
    pub eps: f64,
    /// Position in the cyclic pivot list.
    pub cursor: usize,
    pub trace: ConvergenceTrace,
    pub steps: Vec<JacobiStep>,
}

#[derive(Debug, Clone)]
pub struct JacobiResult {
    pub approx: TuckerApprox,
    pub state: JacobiState,
    pub status: SolverStatus,
    pub gradient_norm: f64,
    pub rotations: usize,
    /// Pivot pairs examined, accepted or not.
    pub pivots_checked: usize,
}

impl JacobiResult {
    pub fn trace(&self) -> &ConvergenceTrace {
        &self.state.trace
    }
}

/// Jacobi algorithm for antisymmetric multilinear rank-`r` approximation.
pub fn jacobi(a: &DenseTensor, r: usize, opts: &JacobiOptions) -> Result<JacobiResult> {
    let n = require_antisymmetric(a)?;
    check_rank(n, r)?;
    let d = a.order();
    let eps = opts.eps.unwrap_or(1.0 / (10.0 * n as f64));
    if !(eps > 0.0 && eps < 2.0 / n as f64) {
        return Err(Error::InvalidParameter(format!(
            "pivot threshold eps = {eps} must lie in (0, 2/n) = (0, {})",
            2.0 / n as f64
        )));
    }

    let q = match &opts.init {
        JacobiInit::Identity => DMatrix::identity(n, n),
        JacobiInit::Hosvd => {
            let u = hosvd_factor(a, r)?;
            let perp = orthonormal_completion(&u)?;
            let mut q = DMatrix::zeros(n, n);
            q.columns_mut(0, r).copy_from(&u);
            q.columns_mut(r, n - r).copy_from(&perp);
            q
        }
        JacobiInit::Orthogonal(q) => {
            if q.shape() != (n, n) {
                return Err(Error::InvalidShape(format!(
                    "initial Q must be {n}x{n}, got {}x{}",
                    q.nrows(),
                    q.ncols()
                )));
            }
            let defect = orthonormality_defect(q);
            if defect > 1e-10 {
                return Err(Error::NotOrthonormal(defect));
            }
            q.clone()
        }
    };
    let a_k = if opts.init == JacobiInit::Identity {
        a.clone()
    } else {
        mode_product_all(a, &q.transpose())?
    };

    let index = BlockIndex::new(n, d, r);
    let pairs = pivot_pairs(n, r);
    let norm_a2 = a.frobenius_norm().powi(2);
    let err_of = |f: f64| (norm_a2 - f).max(0.0).sqrt();

    let mut state = JacobiState {
        q,
        a_k,
        r,
        eps,
        cursor: 0,
        trace: ConvergenceTrace::default(),
        steps: Vec::new(),
    };

    let mut f = index.block_norm_sq(&state.a_k);
    let mut grad = index.gradient(&state.a_k).norm;
    state.trace.push(0, f.sqrt(), err_of(f), grad);

    let mut rotations = 0;
    let mut pivots_checked = 0;
    let status = 'outer: loop {
        if grad <= opts.grad_tol || pairs.is_empty() {
            break SolverStatus::Converged;
        }
        if rotations >= opts.max_rotations {
            break SolverStatus::MaxIterations;
        }
        // Scan the cyclic list for a pair meeting the pivot condition.
        let mut scanned = 0;
        let (i, j) = loop {
            if scanned == pairs.len() {
                break 'outer SolverStatus::Stalled;
            }
            let (i, j) = pairs[state.cursor];
            state.cursor = (state.cursor + 1) % pairs.len();
            scanned += 1;
            pivots_checked += 1;
            let g = 2.0 * d as f64 * index.alpha2(&state.a_k, i, j);
            if g.abs() >= eps * grad {
                break (i, j);
            }
        };

        let (a1, a2, a3) = index.alphas(&state.a_k, i, j);
        let phi = optimal_angle(a1, a2, a3);
        let predicted = d as f64 * (psi(a1, a2, a3, phi) - a1);
        let rot = Rotation { i, j, phi };
        apply_rotation_in_place(&mut state.a_k, &rot)?;
        rot.right_apply(&mut state.q);
        rotations += 1;
        if opts.reantisymmetrize_every > 0 && rotations % opts.reantisymmetrize_every == 0 {
            state.a_k = antisymmetrize(&state.a_k)?;
        }

        let f_before = f;
        f = index.block_norm_sq(&state.a_k);
        grad = index.gradient(&state.a_k).norm;
        let (antisymmetry_defect, norm) = if opts.monitor {
            (antisymmetry_defect(&state.a_k), Some(state.a_k.frobenius_norm()))
        } else {
            (None, None)
        };
        state.steps.push(JacobiStep {
            pivot: (i, j),
            angle: phi,
            predicted_increment: predicted,
            objective_before: f_before,
            objective_after: f,
            antisymmetry_defect,
            norm,
        });
        state.trace.push_pivot(rotations, f.sqrt(), err_of(f), grad, (i, j));
    };

    let u = state.q.columns(0, r).into_owned();
    let approx = TuckerApprox::from_factor(a, u)?;
    Ok(JacobiResult {
        approx,
        state,
        status,
        gradient_norm: grad,
        rotations,
        pivots_checked,
    })
}
