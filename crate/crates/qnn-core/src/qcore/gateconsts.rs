//! Fixed matrices and rotation constructors used across the crate.
//!
//! Two-qubit matrices follow the global index convention: qubit 0 is the
//! most significant bit of the basis-state index.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_vec(2, 2, alloc::vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
        .unwrap()
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap()
}

pub fn hadamard() -> ComplexMatrix {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_real(2, 2, &[h, h, h, -h]).unwrap()
}

/// √X, the square root of Pauli X with SX² = X.
pub fn sqrt_x() -> ComplexMatrix {
    ComplexMatrix::from_vec(
        2,
        2,
        alloc::vec![c(0.5, 0.5), c(0.5, -0.5), c(0.5, -0.5), c(0.5, 0.5)],
    )
    .unwrap()
}

/// `RZ(a) = diag(e^{-ia/2}, e^{ia/2})`.
pub fn rz_matrix(a: f64) -> ComplexMatrix {
    let half = a / 2.0;
    ComplexMatrix::from_vec(
        2,
        2,
        alloc::vec![
            c(libm::cos(half), -libm::sin(half)),
            Complex64::ZERO,
            Complex64::ZERO,
            c(libm::cos(half), libm::sin(half)),
        ],
    )
    .unwrap()
}

/// `RY(a) = e^{-i a Y / 2}`.
pub fn ry_matrix(a: f64) -> ComplexMatrix {
    let (s, co) = (libm::sin(a / 2.0), libm::cos(a / 2.0));
    ComplexMatrix::from_real(2, 2, &[co, -s, s, co]).unwrap()
}

/// `RX(a) = e^{-i a X / 2}`.
pub fn rx_matrix(a: f64) -> ComplexMatrix {
    let (s, co) = (libm::sin(a / 2.0), libm::cos(a / 2.0));
    ComplexMatrix::from_vec(
        2,
        2,
        alloc::vec![c(co, 0.0), c(0.0, -s), c(0.0, -s), c(co, 0.0)],
    )
    .unwrap()
}

/// CNOT with the first listed qubit as control, second as target.
pub fn cnot_matrix() -> ComplexMatrix {
    ComplexMatrix::from_real(
        4,
        4,
        &[
            1.0, 0.0, 0.0, 0.0, //
            0.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 1.0, //
            0.0, 0.0, 1.0, 0.0,
        ],
    )
    .unwrap()
}

pub fn swap_matrix() -> ComplexMatrix {
    ComplexMatrix::from_real(
        4,
        4,
        &[
            1.0, 0.0, 0.0, 0.0, //
            0.0, 0.0, 1.0, 0.0, //
            0.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 1.0,
        ],
    )
    .unwrap()
}
