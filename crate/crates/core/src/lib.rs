//! Variational quantum eigensolver pipeline: integrals, Hartree-Fock, fermion
//! to qubit mappings, state-vector simulation, SPSA and zero-noise
//! extrapolation.

pub mod ansatz;
pub mod circuit;
pub mod error;
pub mod fermion;
pub mod integrals;
pub mod mapping;
pub mod pauli;
pub mod pipeline;
pub mod rng;
pub mod scf;
pub mod spsa;
pub mod tensor;
pub mod zne;

pub use error::{QveError, Result};
