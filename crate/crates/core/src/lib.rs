//! Quantum-circuit estimation of nuclear giant dipole resonances.
//!
//! The crate is `no_std` and only needs `alloc`. It contains a dense
//! statevector simulator, Pauli-string algebra, the harmonic-oscillator
//! encoding of a nucleus onto qubits, the circuit primitives that estimate
//! excitation energies and transition strengths, the collective response
//! model that turns them into a photoabsorption cross section, and the
//! experiment drivers that tie everything together.

#![no_std]

extern crate alloc;

pub mod algorithms;
pub mod encoding;
pub mod error;
pub mod experiment;
pub mod linalg;
pub mod pauli;
pub mod response;
pub mod rng;
pub mod statevector;

pub use error::{Error, Result};
pub use linalg::CMatrix;
pub use num_complex::Complex64;
pub use pauli::{Pauli, PauliSum, PauliTerm};
pub use rng::RngStream;
pub use statevector::{ShotHistogram, StateVector};
