//! Quantum extensions of 2x2 games, entangling braid gates and discretized
//! supersymmetric quantum mechanics.

pub mod braid;
pub mod classical;
pub mod entanglement;
pub mod error;
pub mod gates;
pub mod linalg;
pub mod quantum_game;
pub mod ssqm;

pub use error::{Error, Result};
