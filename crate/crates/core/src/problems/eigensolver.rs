//! Thick-restart Lanczos iteration for the lowest eigenpair of a symmetric
//! operator, using only operator applications and vector arithmetic.
//!
//! The basis is kept fully orthogonal and each expansion vector is the
//! residual of the current lowest Ritz pair, which spans the same Krylov
//! extension as the classical three-term recurrence but survives restarts.

use log::debug;
use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct EigenOptions {
    /// Absolute residual tolerance `‖Hx − λx‖` for a unit vector `x`.
    pub tol: f64,
    /// Maximal basis size before a restart.
    pub basis_size: usize,
    /// Ritz vectors kept across a restart.
    pub keep: usize,
    /// Cap on operator applications.
    pub max_applies: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            basis_size: 60,
            keep: 20,
            max_applies: 50_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    pub vector: DVector<f64>,
    pub residual: f64,
    pub applies: usize,
}

fn orthonormalize_against(mut q: DVector<f64>, basis: &[DVector<f64>]) -> Option<DVector<f64>> {
    let start = q.norm();
    for _ in 0..2 {
        for b in basis {
            let c = b.dot(&q);
            q.axpy(-c, b, 1.0);
        }
    }
    let norm = q.norm();
    (norm > 1e-10 * start && norm > 0.0).then(|| q / norm)
}

/// Lowest eigenpair of the symmetric operator `apply`.
///
/// `project` is applied to every operator output and to every basis vector;
/// pass an orthogonal projector onto an invariant subspace (or the identity)
/// to keep the iteration inside it. `fallback` provides fresh start
/// directions if the Krylov space becomes invariant before convergence.
pub fn lowest_eigenpair(
    mut apply: impl FnMut(&DVector<f64>) -> DVector<f64>,
    project: impl Fn(&mut DVector<f64>),
    start: DVector<f64>,
    mut fallback: impl FnMut(usize) -> DVector<f64>,
    opts: &EigenOptions,
) -> Result<EigenPair> {
    if opts.keep == 0 || opts.keep >= opts.basis_size {
        return Err(Error::InvalidParameter(format!(
            "need 0 < keep < basis_size, got keep = {}, basis_size = {}",
            opts.keep, opts.basis_size
        )));
    }
    let mut applies = 0;
    let mut apply_proj = |v: &DVector<f64>, applies: &mut usize| {
        *applies += 1;
        let mut w = apply(v);
        project(&mut w);
        w
    };

    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(opts.basis_size);
    let mut images: Vec<DVector<f64>> = Vec::with_capacity(opts.basis_size);
    let mut t = DMatrix::<f64>::zeros(0, 0);
    let mut next = start;
    let mut fallbacks = 0;

    loop {
        project(&mut next);
        let q = match orthonormalize_against(next, &basis) {
            Some(q) => q,
            None => {
                fallbacks += 1;
                if fallbacks > 10 {
                    return Err(Error::NoConvergence("Krylov space repeatedly collapsed".into()));
                }
                next = fallback(fallbacks);
                continue;
            }
        };
        let w = apply_proj(&q, &mut applies);
        let m = basis.len();
        let mut grown = DMatrix::zeros(m + 1, m + 1);
        grown.view_mut((0, 0), (m, m)).copy_from(&t);
        for (i, b) in basis.iter().enumerate() {
            let c = b.dot(&w);
            grown[(i, m)] = c;
            grown[(m, i)] = c;
        }
        grown[(m, m)] = q.dot(&w);
        t = grown;
        basis.push(q);
        images.push(w);

        let eig = SymmetricEigen::new(t.clone());
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let combine = |vs: &[DVector<f64>], k: usize| {
            let y = eig.eigenvectors.column(order[k]);
            let mut out = DVector::zeros(vs[0].len());
            for (v, c) in vs.iter().zip(y.iter()) {
                out.axpy(*c, v, 1.0);
            }
            out
        };
        let theta = eig.eigenvalues[order[0]];
        let x = combine(&basis, 0);
        let hx = combine(&images, 0);
        let residual = &hx - &x * theta;
        let rnorm = residual.norm();

        if rnorm <= opts.tol {
            // Confirm with an explicit application to rule out drift in the
            // accumulated images.
            let mut v = x;
            project(&mut v);
            let nv = v.norm();
            v /= nv;
            let hv = apply_proj(&v, &mut applies);
            let value = v.dot(&hv);
            let res = (&hv - &v * value).norm();
            if res <= opts.tol {
                return Ok(EigenPair {
                    value,
                    vector: v,
                    residual: res,
                    applies,
                });
            }
            debug!("explicit residual {res:e} above tolerance, continuing");
        }
        if applies >= opts.max_applies {
            return Err(Error::NoConvergence(format!(
                "residual {rnorm:e} after {applies} operator applications"
            )));
        }
        if basis.len() == opts.basis_size {
            debug!("restart after {applies} applications: theta = {theta}, residual = {rnorm:e}");
            let k = opts.keep;
            let new_basis: Vec<_> = (0..k).map(|j| combine(&basis, j)).collect();
            let new_images: Vec<_> = (0..k).map(|j| combine(&images, j)).collect();
            t = DMatrix::from_fn(k, k, |i, j| if i == j { eig.eigenvalues[order[i]] } else { 0.0 });
            // Re-orthonormalize to keep the basis clean across many restarts.
            basis = new_basis;
            images = new_images;
            reorthonormalize(&mut basis, &mut images, &mut t);
        }
        next = residual;
    }
}

/// Restores orthonormality of `basis` after a restart, transforming the
/// images consistently and recomputing the projected matrix.
fn reorthonormalize(basis: &mut [DVector<f64>], images: &mut [DVector<f64>], t: &mut DMatrix<f64>) {
    let k = basis.len();
    for j in 0..k {
        for i in 0..j {
            let c = basis[i].dot(&basis[j]);
            let (bi, bj) = (basis[i].clone(), images[i].clone());
            basis[j].axpy(-c, &bi, 1.0);
            images[j].axpy(-c, &bj, 1.0);
        }
        let norm = basis[j].norm();
        basis[j] /= norm;
        images[j] /= norm;
    }
    *t = DMatrix::from_fn(k, k, |i, j| basis[i].dot(&images[j]));
    let sym = (&*t + t.transpose()) * 0.5;
    *t = sym;
}
