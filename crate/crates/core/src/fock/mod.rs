//! Bosonic Fock-space machinery: complex matrices, permanents, occupation
//! bases and multi-photon evolution through a linear mode transformation.

mod evolve;
mod matrix;
mod permanent;
mod state;

pub use evolve::{evolve, evolve_bruteforce, MAX_MODES, MAX_PHOTONS};
pub use matrix::ComplexMatrix;
pub use permanent::{permanent, MAX_PERMANENT_DIM};
pub use state::{enumerate_fock_basis, FockState, PhotonicState, PRUNE_THRESHOLD};

pub use num_complex::Complex64 as C64;
