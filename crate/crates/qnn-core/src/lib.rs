//! Simulation and training of two variational quantum-network ansätze — a
//! dissipative quantum neural network (DQNN) built from canonical two-qubit
//! gates, and a QAOA-style alternating-operator network — for the task of
//! learning an unknown unitary.
//!
//! The crate is `no_std` (with `alloc`) and fully deterministic: every random
//! quantity is drawn from an explicitly seeded generator in a fixed order.
//!
//! Module map:
//! * [`qcore`] — dense complex linear algebra, eigensolvers, random sampling,
//!   states and operators.
//! * [`circuits`] — parameterized gates, DQNN/QAOA circuit builders, state
//!   preparation.
//! * [`transpile`] — decomposition into the {CNOT, SX, RZ} basis (one-qubit
//!   Euler synthesis, canonical-gate template, KAK).
//! * [`noise`] — per-basis-gate depolarizing channel and the noisy
//!   density-matrix executor.
//! * [`measure`] — swap-test fidelity estimation and the training cost.
//! * [`train`] — datasets, finite-difference gradient ascent, training loop,
//!   identity-cost baseline.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod circuits;
mod error;
mod evaluator;
pub mod measure;
pub mod noise;
pub mod qcore;
pub mod train;
pub mod transpile;

pub use error::{Error, Result};
