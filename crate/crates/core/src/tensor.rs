//! Dense order-d tensors and the antisymmetrizer.
//!
//! Entries are stored in a single contiguous buffer with the first index
//! varying fastest, so the mode-1 matricization is a plain reinterpretation
//! of the buffer as a column-major `n₁ × (n₂⋯n_d)` matrix.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Order-d dense real tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    dims: Vec<usize>,
    data: Vec<f64>,
}

impl DenseTensor {
    /// Wraps `data` (first index fastest) as a tensor of shape `dims`.
    pub fn new(dims: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        check_dims(&dims)?;
        let len: usize = dims.iter().product();
        if data.len() != len {
            return Err(Error::InvalidShape(format!(
                "data length {} does not match dims {:?} (expected {})",
                data.len(),
                dims,
                len
            )));
        }
        Ok(Self { dims, data })
    }

    /// Zero tensor of shape `dims`.
    ///
    /// # Panics
    /// If `dims` is empty or contains a zero.
    pub fn zeros(dims: &[usize]) -> Self {
        check_dims(dims).expect("invalid tensor dims");
        let len = dims.iter().product();
        Self {
            dims: dims.to_vec(),
            data: vec![0.0; len],
        }
    }

    /// Zero tensor with `d` modes of size `n`.
    pub fn cube(n: usize, d: usize) -> Self {
        Self::zeros(&vec![n; d])
    }

    /// Tensor with entries `f(&[i₁,…,i_d])` (zero-based indices).
    pub fn from_fn(dims: &[usize], mut f: impl FnMut(&[usize]) -> f64) -> Self {
        let mut t = Self::zeros(dims);
        let mut idx = vec![0usize; dims.len()];
        for v in t.data.iter_mut() {
            *v = f(&idx);
            increment(&mut idx, dims);
        }
        t
    }

    /// Outer product `v₁ ⊗ v₂ ⊗ ⋯ ⊗ v_d`.
    pub fn outer(vectors: &[&DVector<f64>]) -> Self {
        let dims: Vec<usize> = vectors.iter().map(|v| v.len()).collect();
        Self::from_fn(&dims, |idx| {
            idx.iter().zip(vectors).map(|(&i, v)| v[i]).product()
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    /// Common mode size if all modes have equal size.
    pub fn cubic_size(&self) -> Option<usize> {
        let n = self.dims[0];
        self.dims.iter().all(|&m| m == n).then_some(n)
    }

    pub(crate) fn require_cubic(&self) -> Result<usize> {
        self.cubic_size().ok_or_else(|| {
            Error::InvalidShape(format!("expected equal dimensions, got {:?}", self.dims))
        })
    }

    /// Linear offset of a zero-based multi-index.
    pub fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.dims.len());
        let mut off = 0;
        let mut stride = 1;
        for (&i, &n) in idx.iter().zip(&self.dims) {
            debug_assert!(i < n);
            off += i * stride;
            stride *= n;
        }
        off
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: f64) {
        let off = self.offset(idx);
        self.data[off] = value;
    }

    /// Strides of the buffer layout (first index fastest).
    pub fn strides(&self) -> Vec<usize> {
        strides(&self.dims)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scale(&mut self, s: f64) {
        self.data.iter_mut().for_each(|v| *v *= s);
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut t = self.clone();
        t.scale(s);
        t
    }

    /// `self += s·other`.
    pub fn axpy(&mut self, s: f64, other: &DenseTensor) -> Result<()> {
        same_dims(self, other)?;
        self.data
            .iter_mut()
            .zip(&other.data)
            .for_each(|(a, b)| *a += s * b);
        Ok(())
    }

    pub fn sub(&self, other: &DenseTensor) -> Result<DenseTensor> {
        let mut t = self.clone();
        t.axpy(-1.0, other)?;
        Ok(t)
    }

    /// Tensor `B` with `B(i_{perm(0)}, …) = A(i_0, …)`, i.e. mode `k` of the
    /// input becomes mode `perm[k]` of the output.
    pub fn permute_modes(&self, perm: &[usize]) -> Result<DenseTensor> {
        let d = self.order();
        if perm.len() != d || !perm.iter().copied().sorted().eq(0..d) {
            return Err(Error::InvalidParameter(format!("{perm:?} is not a permutation of 0..{d}")));
        }
        let mut dims = vec![0; d];
        for (k, &p) in perm.iter().enumerate() {
            dims[p] = self.dims[k];
        }
        let mut out = DenseTensor::zeros(&dims);
        let out_strides = out.strides();
        let mut idx = vec![0usize; d];
        for &v in &self.data {
            let off: usize = idx
                .iter()
                .zip(perm)
                .map(|(&i, &p)| i * out_strides[p])
                .sum();
            out.data[off] = v;
            increment(&mut idx, &self.dims);
        }
        Ok(out)
    }
}

fn check_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() {
        return Err(Error::InvalidShape("tensor order must be at least 1".into()));
    }
    if dims.contains(&0) {
        return Err(Error::InvalidShape(format!("zero-sized mode in {dims:?}")));
    }
    Ok(())
}

pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = Vec::with_capacity(dims.len());
    let mut acc = 1;
    for &n in dims {
        s.push(acc);
        acc *= n;
    }
    s
}

/// Advances a multi-index in buffer order; wraps to zero after the last entry.
pub(crate) fn increment(idx: &mut [usize], dims: &[usize]) {
    for (i, &n) in idx.iter_mut().zip(dims) {
        *i += 1;
        if *i < n {
            return;
        }
        *i = 0;
    }
}

fn same_dims(x: &DenseTensor, y: &DenseTensor) -> Result<()> {
    if x.dims != y.dims {
        return Err(Error::InvalidShape(format!(
            "dimension mismatch: {:?} vs {:?}",
            x.dims, y.dims
        )));
    }
    Ok(())
}

/// Frobenius norm.
pub fn frobenius_norm(x: &DenseTensor) -> f64 {
    x.frobenius_norm()
}

/// Frobenius inner product.
pub fn inner(x: &DenseTensor, y: &DenseTensor) -> Result<f64> {
    same_dims(x, y)?;
    Ok(x.data.iter().zip(&y.data).map(|(a, b)| a * b).sum())
}

/// All permutations of `0..d` together with their signs, identity first.
pub fn permutations_with_sign(d: usize) -> Vec<(Vec<usize>, f64)> {
    (0..d)
        .permutations(d)
        .map(|p| {
            let inversions = (0..d)
                .tuple_combinations()
                .filter(|&(a, b)| p[a] > p[b])
                .count();
            let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
            (p, sign)
        })
        .collect()
}

fn factorial(d: usize) -> f64 {
    (1..=d).map(|k| k as f64).product()
}

/// Antisymmetrizer `(1/d!) Σ_π sign(π) X(π(i₁),…,π(i_d))`.
///
/// Evaluates one sorted multi-index per orbit and fans the value out with
/// signs; entries with a repeated index are set to exactly zero. Cost is
/// `O(C(n,d)·d!·d)`.
pub fn antisymmetrize(x: &DenseTensor) -> Result<DenseTensor> {
    let (n, d) = antisym_shape(x)?;
    let perms = permutations_with_sign(d);
    let strides = x.strides();
    let inv = 1.0 / factorial(d);
    let mut out = DenseTensor::zeros(x.dims());
    let mut offsets = vec![0usize; perms.len()];
    for combo in (0..n).combinations(d) {
        let mut acc = 0.0;
        for (slot, (p, sign)) in offsets.iter_mut().zip(&perms) {
            let off: usize = p.iter().zip(&strides).map(|(&k, &s)| combo[k] * s).sum();
            *slot = off;
            acc += sign * x.data[off];
        }
        let value = acc * inv;
        for (&off, (_, sign)) in offsets.iter().zip(&perms) {
            out.data[off] = sign * value;
        }
    }
    Ok(out)
}

/// Antisymmetrizer by direct summation over all `d!` permuted copies of the
/// tensor. Cost is `O(d!·n^d)`; [`antisymmetrize`] is the faster equivalent.
pub fn antisymmetrize_by_permutations(x: &DenseTensor) -> Result<DenseTensor> {
    let (_, d) = antisym_shape(x)?;
    let mut out = DenseTensor::zeros(x.dims());
    for (p, sign) in permutations_with_sign(d) {
        out.axpy(sign, &x.permute_modes(&p)?)?;
    }
    out.scale(1.0 / factorial(d));
    Ok(out)
}

fn antisym_shape(x: &DenseTensor) -> Result<(usize, usize)> {
    let n = x.require_cubic()?;
    let d = x.order();
    if d < 2 {
        return Err(Error::InvalidShape("antisymmetrizer needs order >= 2".into()));
    }
    Ok((n, d))
}

/// Largest `|A(…,i,j,…) + A(…,j,i,…)|` over all adjacent transpositions, or
/// `None` if the dimensions are unequal.
pub fn antisymmetry_defect(a: &DenseTensor) -> Option<f64> {
    a.cubic_size()?;
    let d = a.order();
    let strides = a.strides();
    let mut idx = vec![0usize; d];
    let mut defect: f64 = 0.0;
    for (off, &v) in a.data.iter().enumerate() {
        for p in 0..d.saturating_sub(1) {
            let (i, j) = (idx[p], idx[p + 1]);
            if i > j {
                continue;
            }
            let swapped = off + j * strides[p] + i * strides[p + 1]
                - i * strides[p]
                - j * strides[p + 1];
            defect = defect.max((v + a.data[swapped]).abs());
        }
        increment(&mut idx, a.dims());
    }
    Some(defect)
}

/// Checks the sign flip under each adjacent transposition of index positions.
pub fn is_antisymmetric(a: &DenseTensor, tol: f64) -> bool {
    matches!(antisymmetry_defect(a), Some(defect) if defect <= tol)
}

/// Default tolerance for structural checks: `1e-12·max(1, ‖A‖)`.
pub fn structural_tol(a: &DenseTensor) -> f64 {
    1e-12 * a.frobenius_norm().max(1.0)
}

pub(crate) fn require_antisymmetric(a: &DenseTensor) -> Result<usize> {
    let n = a.require_cubic()?;
    let tol = structural_tol(a);
    let defect = antisymmetry_defect(a).unwrap_or(f64::INFINITY);
    if defect > tol {
        return Err(Error::NotAntisymmetric { defect, tol });
    }
    Ok(n)
}

/// Mode product `X ×_μ M` (zero-based `mu`): `(X ×_μ M)_(μ) = M·X_(μ)`.
pub fn mode_product(x: &DenseTensor, m: &DMatrix<f64>, mu: usize) -> Result<DenseTensor> {
    let d = x.order();
    if mu >= d {
        return Err(Error::ModeOutOfRange { mode: mu, order: d });
    }
    let n = x.dims[mu];
    if m.ncols() != n {
        return Err(Error::InvalidShape(format!(
            "matrix has {} columns but mode {} has size {}",
            m.ncols(),
            mu,
            n
        )));
    }
    let rows = m.nrows();
    if rows == 0 {
        return Err(Error::InvalidShape("mode product with an empty matrix".into()));
    }
    let left: usize = x.dims[..mu].iter().product();
    let right: usize = x.dims[mu + 1..].iter().product();
    let mut dims = x.dims.clone();
    dims[mu] = rows;
    let mut y = vec![0.0; left * rows * right];
    for r in 0..right {
        for b in 0..n {
            let xs = &x.data[(r * n + b) * left..][..left];
            for a in 0..rows {
                let c = m[(a, b)];
                if c == 0.0 {
                    continue;
                }
                let ys = &mut y[(r * rows + a) * left..][..left];
                for (yv, xv) in ys.iter_mut().zip(xs) {
                    *yv += c * xv;
                }
            }
        }
    }
    DenseTensor::new(dims, y)
}

/// Applies `M` in every mode: `X ×₁ M ×₂ M ⋯ ×_d M`.
pub fn mode_product_all(x: &DenseTensor, m: &DMatrix<f64>) -> Result<DenseTensor> {
    let mut t = x.clone();
    for mu in 0..x.order() {
        t = mode_product(&t, m, mu)?;
    }
    Ok(t)
}

/// Projection `S = A ×₁ Uᵀ ⋯ ×_d Uᵀ` onto the span of the columns of `u`.
pub fn project(a: &DenseTensor, u: &DMatrix<f64>) -> Result<DenseTensor> {
    mode_product_all(a, &u.transpose())
}

/// Contraction `X ×_μ uᵀ`, which removes mode `mu`. Contracting the only mode
/// of an order-1 tensor yields a tensor of shape `[1]`.
pub fn contract(x: &DenseTensor, u: &DVector<f64>, mu: usize) -> Result<DenseTensor> {
    let row = u.transpose();
    let y = mode_product(x, &DMatrix::from_row_slice(1, row.len(), row.as_slice()), mu)?;
    let mut dims = y.dims.clone();
    if dims.len() > 1 {
        dims.remove(mu);
    }
    DenseTensor::new(dims, y.data)
}

/// Contracts every mode except `skip` with the given vectors; the result is
/// the vector `X ×_{ν≠skip} u_νᵀ`.
pub fn contract_all_but(x: &DenseTensor, vectors: &[&DVector<f64>], skip: usize) -> Result<DVector<f64>> {
    let d = x.order();
    if vectors.len() != d {
        return Err(Error::InvalidShape(format!("need {d} vectors, got {}", vectors.len())));
    }
    if skip >= d {
        return Err(Error::ModeOutOfRange { mode: skip, order: d });
    }
    // Contract trailing modes first so the remaining mode indices stay valid.
    let mut t = x.clone();
    for mu in (0..d).rev() {
        if mu != skip {
            t = contract(&t, vectors[mu], mu)?;
        }
    }
    Ok(DVector::from_vec(t.data))
}

/// Multilinear form `X ×₁ u₁ᵀ ⋯ ×_d u_dᵀ`.
pub fn multilinear_form(x: &DenseTensor, vectors: &[&DVector<f64>]) -> Result<f64> {
    let v = contract_all_but(x, vectors, 0)?;
    Ok(v.dot(vectors[0]))
}
