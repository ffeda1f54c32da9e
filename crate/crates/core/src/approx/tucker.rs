use nalgebra::DMatrix;

use crate::error::Result;
use crate::tensor::{mode_product_all, project, DenseTensor};

/// Antisymmetric Tucker approximation `S ×₁ U ×₂ U ⋯ ×_d U`.
#[derive(Debug, Clone)]
pub struct TuckerApprox {
    /// `n × r` factor with orthonormal columns.
    pub factor: DMatrix<f64>,
    /// Antisymmetric `r^{⊗d}` core.
    pub core: DenseTensor,
    /// `‖S‖`.
    pub objective: f64,
    /// `‖A − S ×₁ U ⋯ ×_d U‖`, computed from the explicit reconstruction.
    pub error: f64,
}

impl TuckerApprox {
    /// Builds the approximation with core `A ×₁ Uᵀ ⋯ ×_d Uᵀ`.
    pub fn from_factor(a: &DenseTensor, factor: DMatrix<f64>) -> Result<Self> {
        let core = project(a, &factor)?;
        let objective = core.frobenius_norm();
        let recon = mode_product_all(&core, &factor)?;
        let error = a.sub(&recon)?.frobenius_norm();
        Ok(Self {
            factor,
            core,
            objective,
            error,
        })
    }

    pub fn rank(&self) -> usize {
        self.factor.ncols()
    }

    pub fn reconstruct(&self) -> Result<DenseTensor> {
        mode_product_all(&self.core, &self.factor)
    }
}
