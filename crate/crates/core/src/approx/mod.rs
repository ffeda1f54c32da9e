//! Low multilinear rank approximation preserving antisymmetry: truncated
//! HOSVD, HOOI with a final antisymmetrization, and the Jacobi algorithm.

mod hooi;
mod hosvd;
mod jacobi;
mod trace;
mod tucker;

pub use hooi::{hooi, hooi_gradient, FactorInit, HooiOptions, HooiResult};
pub(crate) use hooi::partial_projection;
pub use hosvd::{hosvd_factor, thosvd};
pub(crate) use hosvd::check_rank;
pub use jacobi::{
    jacobi, jacobi_gradient, jacobi_objective, optimal_angle, pivot_pairs, psi, JacobiGradient, JacobiInit,
    JacobiOptions, JacobiResult, JacobiState, JacobiStep,
};
pub use trace::{ConvergenceTrace, SolverStatus, TraceRecord};
pub use tucker::TuckerApprox;
