//! Dense factorizations used by the approximation algorithms.
//!
//! SVDs and symmetric eigendecompositions are delegated to `nalgebra`; this
//! module fixes ordering and sign conventions so that downstream
//! initializations are reproducible.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Truncated singular value decomposition `M ≈ U·diag(s)·Vᵀ`.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub u: DMatrix<f64>,
    pub s: Vec<f64>,
    pub v: DMatrix<f64>,
}

/// Symmetric eigendecomposition ordered by descending `|λ|`.
#[derive(Debug, Clone)]
pub struct SymEigResult {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

/// Index of the entry of largest magnitude; the lowest index wins ties.
fn pivot_index(col: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, -1.0);
    for (k, v) in col.enumerate() {
        if v.abs() > best.1 {
            best = (k, v.abs());
        }
    }
    best.0
}

/// Flips column `k` of `primary` (and of `paired`, if given) so that its
/// entry of largest magnitude is positive.
fn fix_sign(primary: &mut DMatrix<f64>, paired: Option<&mut DMatrix<f64>>, k: usize) -> bool {
    let p = pivot_index(primary.column(k).iter().copied());
    let flip = primary[(p, k)] < 0.0;
    if flip {
        primary.column_mut(k).neg_mut();
        if let Some(v) = paired {
            v.column_mut(k).neg_mut();
        }
    }
    flip
}

/// Leading `r` singular triplets of `m`, sorted by nonincreasing singular
/// value, with each left singular vector's largest-magnitude entry positive.
pub fn svd_leading(m: &DMatrix<f64>, r: usize) -> Result<SvdResult> {
    let k = m.nrows().min(m.ncols());
    if r == 0 || r > k {
        return Err(Error::InvalidRank {
            rank: r,
            reason: format!("need 1 <= r <= {k} for a {}x{} matrix", m.nrows(), m.ncols()),
        });
    }
    let svd = m.clone().svd(true, true);
    let u_full = svd.u.expect("left singular vectors requested");
    let vt_full = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let order = &order[..r];

    let mut u = DMatrix::zeros(m.nrows(), r);
    let mut v = DMatrix::zeros(m.ncols(), r);
    let mut s = Vec::with_capacity(r);
    for (c, &o) in order.iter().enumerate() {
        u.set_column(c, &u_full.column(o));
        v.set_column(c, &vt_full.row(o).transpose());
        s.push(svd.singular_values[o]);
    }
    for c in 0..r {
        fix_sign(&mut u, Some(&mut v), c);
    }
    Ok(SvdResult { u, s, v })
}

/// All singular values, nonincreasing.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Full spectrum of a symmetric matrix, ordered by descending `|λ|`
/// (positive first on ties), with eigenvector signs fixed as in
/// [`svd_leading`]. The input is symmetrized as `(M + Mᵀ)/2`.
pub fn sym_eig(m: &DMatrix<f64>) -> Result<SymEigResult> {
    if !m.is_square() {
        return Err(Error::InvalidShape(format!("{}x{} matrix is not square", m.nrows(), m.ncols())));
    }
    let defect = (m - m.transpose()).norm();
    let tol = 1e-10 * (1.0 + m.norm());
    if defect > tol {
        return Err(Error::NotSymmetric { defect, tol });
    }
    let sym = (m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| {
        let (la, lb) = (eig.eigenvalues[a], eig.eigenvalues[b]);
        lb.abs().total_cmp(&la.abs()).then(lb.total_cmp(&la))
    });
    let n = m.nrows();
    let mut vectors = DMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (c, &o) in order.iter().enumerate() {
        vectors.set_column(c, &eig.eigenvectors.column(o));
        values.push(eig.eigenvalues[o]);
        fix_sign(&mut vectors, None, c);
    }
    Ok(SymEigResult { values, vectors })
}

/// `‖UᵀU − I‖_F`.
pub fn orthonormality_defect(u: &DMatrix<f64>) -> f64 {
    let g = u.transpose() * u;
    (g - DMatrix::identity(u.ncols(), u.ncols())).norm()
}

/// Completes orthonormal columns `U` (n×r) to an orthogonal `[U, U⊥]`,
/// returning `U⊥` (n×(n−r)). Columns of `U⊥` are Gram–Schmidt residuals of
/// canonical unit vectors, picking the largest residual at each step.
pub fn orthonormal_completion(u: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (n, r) = u.shape();
    let defect = orthonormality_defect(u);
    if defect > 1e-12 * (r.max(1) as f64).sqrt() * 10.0 {
        return Err(Error::NotOrthonormal(defect));
    }
    if r > n {
        return Err(Error::InvalidShape(format!("{r} columns exceed dimension {n}")));
    }
    let mut basis: Vec<DVector<f64>> = u.column_iter().map(|c| c.into_owned()).collect();
    let mut completion = DMatrix::zeros(n, n - r);
    let mut used = vec![false; n];
    for c in 0..n - r {
        let mut best: Option<(usize, DVector<f64>, f64)> = None;
        for (k, taken) in used.iter().enumerate() {
            if *taken {
                continue;
            }
            let mut e = DVector::zeros(n);
            e[k] = 1.0;
            let res = orthogonalize(e, &basis);
            let norm = res.norm();
            if best.as_ref().is_none_or(|b| norm > b.2 + 1e-14) {
                best = Some((k, res, norm));
            }
        }
        let (k, res, norm) = best.expect("completion candidate exists");
        used[k] = true;
        let q = res / norm;
        completion.set_column(c, &q);
        basis.push(q);
    }
    Ok(completion)
}

/// Two passes of modified Gram–Schmidt of `v` against orthonormal `basis`.
pub fn orthogonalize(mut v: DVector<f64>, basis: &[DVector<f64>]) -> DVector<f64> {
    for _ in 0..2 {
        for q in basis {
            let c = q.dot(&v);
            v.axpy(-c, q, 1.0);
        }
    }
    v
}

/// Orthonormalizes the columns of `m` in order (modified Gram–Schmidt with
/// reorthogonalization). Fails if a column is numerically dependent on the
/// previous ones.
pub fn orthonormalize(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(m.ncols());
    for col in m.column_iter() {
        let orig = col.norm();
        let v = orthogonalize(col.into_owned(), &basis);
        let norm = v.norm();
        if norm <= 1e-12 * orig.max(f64::MIN_POSITIVE) {
            return Err(Error::NotOrthonormal(1.0));
        }
        basis.push(v / norm);
    }
    Ok(DMatrix::from_columns(&basis))
}

/// Random `n × r` matrix with orthonormal columns (Gaussian entries followed
/// by Gram–Schmidt).
pub fn random_orthonormal(n: usize, r: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    loop {
        let g = DMatrix::from_fn(n, r, |_, _| rng.sample::<f64, _>(StandardNormal));
        if let Ok(q) = orthonormalize(&g) {
            return q;
        }
    }
}
