//! Givens rotations acting on all modes of a tensor.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::tensor::DenseTensor;

/// Givens rotation `R(i, j, φ)` on zero-based rows/columns `i < j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    pub i: usize,
    pub j: usize,
    pub phi: f64,
}

impl Rotation {
    pub fn new(i: usize, j: usize, phi: f64) -> Result<Self> {
        if i >= j {
            return Err(Error::InvalidParameter(format!("rotation needs i < j, got ({i}, {j})")));
        }
        Ok(Self { i, j, phi })
    }

    /// Dense `n × n` matrix with `R[i,i] = R[j,j] = cos φ`, `R[i,j] = −sin φ`,
    /// `R[j,i] = sin φ`.
    pub fn matrix(&self, n: usize) -> DMatrix<f64> {
        let (s, c) = self.phi.sin_cos();
        let mut r = DMatrix::identity(n, n);
        r[(self.i, self.i)] = c;
        r[(self.j, self.j)] = c;
        r[(self.i, self.j)] = -s;
        r[(self.j, self.i)] = s;
        r
    }

    /// `Q ← Q·R(i, j, φ)`, touching only columns `i` and `j`.
    pub fn right_apply(&self, q: &mut DMatrix<f64>) {
        let (s, c) = self.phi.sin_cos();
        for row in 0..q.nrows() {
            let (qi, qj) = (q[(row, self.i)], q[(row, self.j)]);
            q[(row, self.i)] = c * qi + s * qj;
            q[(row, self.j)] = -s * qi + c * qj;
        }
    }
}

/// `A ×₁ Rᵀ ×₂ Rᵀ ⋯ ×_d Rᵀ`, updating only the hyperplanes with index `i` or
/// `j` in some position.
pub fn apply_rotation(a: &DenseTensor, r: &Rotation) -> Result<DenseTensor> {
    let mut out = a.clone();
    apply_rotation_in_place(&mut out, r)?;
    Ok(out)
}

pub fn apply_rotation_in_place(a: &mut DenseTensor, r: &Rotation) -> Result<()> {
    let n = a.require_cubic()?;
    if r.i >= r.j || r.j >= n {
        return Err(Error::InvalidParameter(format!(
            "rotation indices ({}, {}) out of range for size {n}",
            r.i, r.j
        )));
    }
    let (s, c) = r.phi.sin_cos();
    let d = a.order();
    let dims = a.dims().to_vec();
    let data = a.data_mut();
    for mu in 0..d {
        let left: usize = dims[..mu].iter().product();
        let right: usize = dims[mu + 1..].iter().product();
        for rr in 0..right {
            let base = rr * n * left;
            let oi = base + r.i * left;
            let oj = base + r.j * left;
            for l in 0..left {
                let (xi, xj) = (data[oi + l], data[oj + l]);
                data[oi + l] = c * xi + s * xj;
                data[oj + l] = -s * xi + c * xj;
            }
        }
    }
    Ok(())
}
