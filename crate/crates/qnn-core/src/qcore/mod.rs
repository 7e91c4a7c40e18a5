//! Dense complex linear algebra, eigensolvers, random sampling, and
//! state/operator primitives underpinning all simulation.
//!
//! Everything here is a pure function of its inputs plus an explicitly
//! passed [`SeededRng`]; values are safe to share read-only across threads.

pub mod eig;
pub mod gateconsts;
pub mod matrix;
pub mod random;
pub mod state;

pub use eig::{eigh, eigh_real_symmetric, expm_from_eigh, expm_hermitian};
pub use matrix::{kron, ComplexMatrix};
pub use random::{sample_gue, sample_haar_state, sample_haar_unitary, SeededRng};
pub use state::{fidelity, DensityMatrix, PureState};

pub use num_complex::Complex64;
