use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::{Error, Result};

/// Dense row-major complex matrix. All operators, generators and density
/// matrices in this crate are carried by this type; dimensions stay small
/// (at most a few qubits), so no sparsity or blocking is attempted.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be >= 1");
        Self { rows, cols, data: vec![Complex64::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::ONE;
        }
        m
    }

    /// Build from a row-major coefficient vector.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, got: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    /// Convenience constructor from real entries.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::from_vec(rows, cols, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == Complex64::ZERO {
                    continue;
                }
                let row_k = k * other.cols;
                let row_i = i * other.cols;
                for j in 0..other.cols {
                    out.data[row_i + j] += a * other.data[row_k + j];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let data = self.data.iter().map(|a| a * s).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        let data = self.data.iter().map(|a| a.conj()).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.data[r * self.cols + c].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self.data[i * self.cols + i]).sum()
    }

    /// Largest entry magnitude of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// `‖U†U − I‖_max ≤ tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square() && self.unitarity_deviation() <= tol
    }

    pub fn unitarity_deviation(&self) -> f64 {
        self.dagger().matmul(self).max_abs_diff(&Self::identity(self.rows))
    }

    /// `‖H − H†‖_max ≤ tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.hermiticity_deviation() <= tol
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for r in 0..self.rows {
            for c in 0..self.cols {
                let d = (self.get(r, c) - self.get(c, r).conj()).norm();
                dev = dev.max(d);
            }
        }
        dev
    }

    /// Require unitarity within `tol`, as a checked precondition.
    pub fn require_unitary(&self, tol: f64) -> Result<()> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, got: self.cols });
        }
        let dev = self.unitarity_deviation();
        if dev > tol {
            return Err(Error::NotUnitary { deviation: dev });
        }
        Ok(())
    }

    /// Require Hermiticity within `tol`, as a checked precondition.
    pub fn require_hermitian(&self, tol: f64) -> Result<()> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, got: self.cols });
        }
        let dev = self.hermiticity_deviation();
        if dev > tol {
            return Err(Error::NotHermitian { deviation: dev });
        }
        Ok(())
    }

    /// Matrix-vector product.
    pub fn apply_to(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![Complex64::ZERO; self.rows];
        for r in 0..self.rows {
            let mut acc = Complex64::ZERO;
            let base = r * self.cols;
            for c in 0..self.cols {
                acc += self.data[base + c] * v[c];
            }
            out[r] = acc;
        }
        out
    }
}

/// Kronecker product, `(rows_a·rows_b) × (cols_a·cols_b)`, with `a`'s index
/// as the most significant block index.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for ar in 0..a.rows() {
        for ac in 0..a.cols() {
            let av = a.get(ar, ac);
            if av == Complex64::ZERO {
                continue;
            }
            for br in 0..b.rows() {
                for bc in 0..b.cols() {
                    out.set(ar * b.rows() + br, ac * b.cols() + bc, av * b.get(br, bc));
                }
            }
        }
    }
    out
}
