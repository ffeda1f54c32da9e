//! Matricizations (unfoldings) of dense tensors.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::tensor::{increment, strides, DenseTensor};

/// Which modes index the rows of a matricization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unfolding {
    /// Rows indexed by one (zero-based) mode, columns by the remaining modes
    /// in increasing order, earliest fastest.
    Mode(usize),
    /// Rows indexed by `(i₁, i₂)`, columns by `(i₃, i₄)` of an order-4 tensor.
    Pair12,
}

/// A matrix view of a tensor together with the information needed to fold
/// it back.
#[derive(Debug, Clone, PartialEq)]
pub struct Matricization {
    pub unfolding: Unfolding,
    pub dims: Vec<usize>,
    pub matrix: DMatrix<f64>,
}

impl Matricization {
    /// Inverse reshape back to the original tensor.
    pub fn fold(&self) -> Result<DenseTensor> {
        match self.unfolding {
            // Both layouts coincide with the tensor buffer.
            Unfolding::Mode(0) | Unfolding::Pair12 => {
                DenseTensor::new(self.dims.clone(), self.matrix.as_slice().to_vec())
            }
            Unfolding::Mode(mu) => {
                let mut t = DenseTensor::zeros(&self.dims);
                let col_strides = column_strides(&self.dims, mu);
                let mut idx = vec![0usize; self.dims.len()];
                for v in t.data_mut() {
                    let col: usize = column_of(&idx, &col_strides, mu);
                    *v = self.matrix[(idx[mu], col)];
                    increment(&mut idx, &self.dims);
                }
                Ok(t)
            }
        }
    }
}

fn column_strides(dims: &[usize], mu: usize) -> Vec<usize> {
    let mut rest: Vec<usize> = dims.to_vec();
    rest.remove(mu);
    let mut s = strides(&rest);
    s.insert(mu, 0);
    s
}

fn column_of(idx: &[usize], col_strides: &[usize], mu: usize) -> usize {
    idx.iter()
        .zip(col_strides)
        .enumerate()
        .filter(|(k, _)| *k != mu)
        .map(|(_, (&i, &s))| i * s)
        .sum()
}

/// Mode-`mu` matricization (zero-based mode), shape `n_μ × ∏_{ν≠μ} n_ν`.
pub fn matricize(x: &DenseTensor, mu: usize) -> Result<Matricization> {
    let d = x.order();
    if mu >= d {
        return Err(Error::ModeOutOfRange { mode: mu, order: d });
    }
    let dims = x.dims().to_vec();
    let rows = dims[mu];
    let cols = x.len() / rows;
    let matrix = if mu == 0 {
        DMatrix::from_column_slice(rows, cols, x.data())
    } else {
        let mut m = DMatrix::zeros(rows, cols);
        let col_strides = column_strides(&dims, mu);
        let mut idx = vec![0usize; d];
        for &v in x.data() {
            m[(idx[mu], column_of(&idx, &col_strides, mu))] = v;
            increment(&mut idx, &dims);
        }
        m
    };
    Ok(Matricization {
        unfolding: Unfolding::Mode(mu),
        dims,
        matrix,
    })
}

/// `(1,2)`-matricization of an order-4 tensor, shape `n₁n₂ × n₃n₄`.
pub fn matricize_12(x: &DenseTensor) -> Result<Matricization> {
    if x.order() != 4 {
        return Err(Error::InvalidShape(format!(
            "(1,2)-matricization needs an order-4 tensor, got order {}",
            x.order()
        )));
    }
    let dims = x.dims().to_vec();
    let matrix = DMatrix::from_column_slice(dims[0] * dims[1], dims[2] * dims[3], x.data());
    Ok(Matricization {
        unfolding: Unfolding::Pair12,
        dims,
        matrix,
    })
}
