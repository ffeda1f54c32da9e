use std::f64::consts::PI;

use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::eigensolver::{lowest_eigenpair, EigenOptions};
use super::generators::random_antisymmetric;
use crate::error::{Error, Result};
use crate::tensor::{antisymmetrize, DenseTensor};

/// Finite-difference discretization of
/// `H = −½ Σ_μ ∂²/∂x_μ² + c_v Σ_μ cos(2π x_μ) + c_w Σ_{μ<ν} cos(2π(x_μ − x_ν))`
/// on the periodic grid `ξ_i = 2πi/n`, `i = 0, …, n−1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianSpec {
    pub d: usize,
    pub n: usize,
    pub c_v: f64,
    pub c_w: f64,
}

impl HamiltonianSpec {
    /// Spec with the default strengths `c_v = 100`, `c_w = 5`.
    pub fn new(d: usize, n: usize) -> Self {
        Self { d, n, c_v: 100.0, c_w: 5.0 }
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::InvalidParameter(format!("need n >= 3 grid points, got {}", self.n)));
        }
        if self.d == 0 {
            return Err(Error::InvalidParameter("need d >= 1".into()));
        }
        if !self.c_v.is_finite() || !self.c_w.is_finite() {
            return Err(Error::InvalidParameter("c_v and c_w must be finite".into()));
        }
        Ok(())
    }
}

/// Grid points `ξ_i = 2πi/n`.
pub fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect()
}

/// Applies the discretized Hamiltonian to `x` without forming a matrix.
///
/// Work is split over the slices of the last mode and runs in parallel.
pub fn hamiltonian_apply(spec: &HamiltonianSpec, x: &DenseTensor) -> Result<DenseTensor> {
    spec.validate()?;
    let (n, d) = (spec.n, spec.d);
    if x.dims() != vec![n; d].as_slice() {
        return Err(Error::InvalidShape(format!(
            "expected shape {:?}, got {:?}",
            vec![n; d],
            x.dims()
        )));
    }
    let xi = grid(n);
    let pot: Vec<f64> = xi.iter().map(|&t| spec.c_v * (2.0 * PI * t).cos()).collect();
    let pair: Vec<f64> = (0..n * n)
        .map(|k| spec.c_w * (2.0 * PI * (xi[k % n] - xi[k / n])).cos())
        .collect();
    let lap = -0.5 / (spec.spacing() * spec.spacing());
    let strides: Vec<usize> = (0..d).map(|k| n.pow(k as u32)).collect();
    let src = x.data();
    let chunk = n.pow(d as u32 - 1);

    let mut out = vec![0.0; src.len()];
    out.par_chunks_mut(chunk).enumerate().for_each(|(last, slice)| {
        let mut idx = vec![0usize; d];
        idx[d - 1] = last;
        let base = last * chunk;
        for (local, y) in slice.iter_mut().enumerate() {
            let off = base + local;
            let v = src[off];
            let mut acc = 0.0;
            for mu in 0..d {
                let i = idx[mu];
                let s = strides[mu];
                let up = if i + 1 == n { off + s - n * s } else { off + s };
                let down = if i == 0 { off + (n - 1) * s } else { off - s };
                acc += lap * (src[up] - 2.0 * v + src[down]);
                acc += pot[i] * v;
                for nu in mu + 1..d {
                    acc += pair[i + n * idx[nu]] * v;
                }
            }
            *y = acc;
            for digit in idx.iter_mut().take(d.saturating_sub(1)) {
                *digit += 1;
                if *digit < n {
                    break;
                }
                *digit = 0;
            }
        }
    });
    DenseTensor::new(vec![n; d], out)
}

#[derive(Debug, Clone)]
pub struct GroundStateOptions {
    pub tol: f64,
    pub seed: u64,
    pub eigen: EigenOptions,
}

impl Default for GroundStateOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            seed: 0,
            eigen: EigenOptions::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GroundState {
    pub eigenvalue: f64,
    /// Antisymmetric eigentensor of unit Frobenius norm.
    pub eigentensor: DenseTensor,
    pub residual: f64,
    pub applies: usize,
}

/// Smallest eigenvalue of the Hamiltonian restricted to antisymmetric
/// tensors, i.e. of the composition of the antisymmetrizer with `H`.
///
/// Starts from a seeded random antisymmetric tensor and re-antisymmetrizes
/// after every operator application.
pub fn antisym_ground_state(spec: &HamiltonianSpec, opts: &GroundStateOptions) -> Result<GroundState> {
    spec.validate()?;
    let (n, d) = (spec.n, spec.d);
    if n < d {
        return Err(Error::InvalidShape(format!("n = {n} < d = {d}: no antisymmetric tensors")));
    }
    let dims = vec![n; d];
    let to_tensor = |v: &DVector<f64>| DenseTensor::new(dims.clone(), v.as_slice().to_vec()).expect("matching length");
    let antisym = |v: &mut DVector<f64>| {
        if d >= 2 {
            let a = antisymmetrize(&to_tensor(v)).expect("cubic tensor");
            v.copy_from_slice(a.data());
        }
    };
    let apply = |v: &DVector<f64>| {
        let y = hamiltonian_apply(spec, &to_tensor(v)).expect("validated spec");
        DVector::from_vec(y.into_data())
    };
    let start = DVector::from_vec(random_antisymmetric(n, d, opts.seed).into_data());
    let fallback = |k: usize| DVector::from_vec(random_antisymmetric(n, d, opts.seed.wrapping_add(k as u64)).into_data());
    let eopts = EigenOptions { tol: opts.tol, ..opts.eigen.clone() };
    let pair = lowest_eigenpair(apply, antisym, start, fallback, &eopts)?;
    Ok(GroundState {
        eigenvalue: pair.value,
        eigentensor: to_tensor(&pair.vector),
        residual: pair.residual,
        applies: pair.applies,
    })
}
