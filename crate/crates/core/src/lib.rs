//! Preparation and tomography of extreme AGP (Cooper-paired qubit) states.
//!
//! The crate is organized bottom-up:
//!
//! * [`statevector`]: dense r-qubit simulation, AGP preparation, number
//!   projection, shot sampling with optional Monte-Carlo noise.
//! * [`pauli`] and [`fermion`]: operator algebra and the Jordan-Wigner map.
//! * [`pairing`]: pair operators, their Pauli expansions, joint-basis
//!   measurement settings with particle-number post-selection, and
//!   OpenQASM 2.0 export.
//! * [`rdm`]: geminal block of the two-particle reduced density matrix,
//!   its large eigenvalue and the finite-rank bound.
//! * [`oracle`]: a brute-force two-particle RDM built from full
//!   Jordan-Wigner strings, used to cross-check everything above.
//!
//! Qubit indices in the public API are 1-based. Basis index `b` stores
//! qubit `k` in bit `k - 1`; bit value 1 means the orbital is occupied.

pub mod error;
pub mod fermion;
pub mod oracle;
pub mod pairing;
pub mod pauli;
pub mod rdm;
pub mod statevector;

pub use error::{AgpError, Result};
pub use num_complex::Complex64;
