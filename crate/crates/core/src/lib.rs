//! Simulation of post-selected CZ gates built from the parallel beam
//! splitters of a single gradient metasurface.
//!
//! The pipeline is: describe the device ([`metasurface::MetasurfaceConfig`]),
//! build its mode transfer matrix ([`metasurface::build_parallel_bs`]),
//! inject logical qubits as single photons ([`encoding::inject`]), evolve the
//! Fock state ([`fock::evolve`]) and post-select one photon per qubit
//! register ([`encoding::post_select`]). [`analysis`] turns that into truth
//! tables, logical operators and fidelities; [`sweep`] scans imperfections.

pub mod analysis;
pub mod cli;
pub mod encoding;
pub mod error;
pub mod fock;
pub mod metasurface;
pub mod report;
pub mod sweep;

pub use error::{Error, Result};
pub use fock::C64;
