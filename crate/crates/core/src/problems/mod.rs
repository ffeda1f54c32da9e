//! Test problems: random and function-related tensors, and antisymmetric
//! ground states of a discretized many-particle Hamiltonian.

mod eigensolver;
mod generators;
mod hamiltonian;

pub use eigensolver::{lowest_eigenpair, EigenOptions, EigenPair};
pub use generators::{function_tensor, random_antisymmetric};
pub use hamiltonian::{antisym_ground_state, grid, hamiltonian_apply, GroundState, GroundStateOptions, HamiltonianSpec};
