//! Two-qubit gate analysis: canonical non-local decomposition, maximal
//! entanglement creation from product inputs, and ancilla-assisted
//! entanglement optimization.
//!
//! The crate is organized bottom-up:
//!
//! * [`numerics`] small dense complex kernels (Jacobi eigensolvers, Schmidt
//!   decomposition, Haar sampling).
//! * [`states`] bipartite pure states and entanglement measures.
//! * [`magic`] the magic basis and concurrence.
//! * [`canonical`] the decomposition `U = (UA⊗UB)·Ud(α)·(VA⊗VB)`.
//! * [`capability`] maximal concurrence and best product inputs.
//! * [`ancilla`] entanglement creation with one ancilla qubit per party.
//! * [`cli`] command implementations behind the `entcap` binary.

pub mod ancilla;
pub mod canonical;
pub mod capability;
pub mod cli;
mod error;
pub mod magic;
pub mod numerics;
pub mod states;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
