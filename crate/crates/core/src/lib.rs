//! # entro
//!
//! Entropy bookkeeping for classical and quantum systems in which the joint
//! entropy of a closed system is a conserved quantity.
//!
//! - [`classical`]: probability tables, Shannon/conditional/mutual entropies,
//!   Gibbs distributions, and the measurement and equilibration demonstrations.
//! - [`quantum`]: density-matrix kernel (Jacobi eigensolver, partial trace,
//!   purification, Schmidt decomposition, unitary evolution, Gibbs states).
//! - [`quantum_entropy`]: von Neumann entropies, the conditional amplitude
//!   matrix, quantum Venn diagrams and the inseparability witness.
//! - [`scenarios`]: ancilla-based measurement of an EPR pair.
//! - [`black_hole`]: formation/evaporation entropy ledger.
//! - [`selftest`]: the acceptance checks, runnable from the CLI.
//!
//! Entropies are reported in bits unless a [`LogBase`] says otherwise; the
//! black-hole module works in nats with ħ = G = c = k = 1.

#![forbid(unsafe_code)]

pub mod black_hole;
pub mod classical;
pub mod diagram;
mod error;
mod logbase;
pub mod quantum;
pub mod quantum_entropy;
pub mod scenarios;
pub mod selftest;

pub use diagram::EntropyDiagram;
pub use error::{Error, Result};
pub use logbase::LogBase;
