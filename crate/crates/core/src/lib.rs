//! Structure-preserving low multilinear rank approximation of antisymmetric
//! tensors.
//!
//! A tensor `A ∈ ℝ^{n×⋯×n}` of order `d` is antisymmetric if swapping any two
//! indices flips its sign. Its multilinear rank approximations can be taken
//! of the form `S ×₁ U ×₂ U ⋯ ×_d U` with one orthonormal factor `U` and an
//! antisymmetric core `S`. The crate provides
//!
//! * dense tensors, the antisymmetrizer, matricizations and mode products
//!   ([`tensor`], [`matricize`], [`rotation`]);
//! * multilinear rank computation and the extremal rank constructions
//!   ([`rank`]);
//! * truncated HOSVD, HOOI and a Jacobi rotation algorithm ([`approx`]);
//! * rank-`d` approximation via the higher-order power method ([`rank_d`]);
//! * generators for test problems, including antisymmetric ground states of
//!   a model Hamiltonian ([`problems`]);
//! * batch experiments and file formats ([`experiment`], [`io`]).
//!
//! Indices are zero-based throughout.

pub mod approx;
pub mod error;
pub mod experiment;
pub mod io;
pub mod linalg;
pub mod matricize;
pub mod problems;
pub mod rank;
pub mod rank_d;
pub mod rotation;
pub mod tensor;

pub use error::{Error, Result};
pub use tensor::{antisymmetrize, is_antisymmetric, DenseTensor};
