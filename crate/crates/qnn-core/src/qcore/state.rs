//! Pure states and density matrices with subset-unitary application and
//! partial trace.
//!
//! Index convention used everywhere in this crate: qubit 0 is the most
//! significant bit of the computational-basis index, so for an `n`-qubit
//! register the bit of qubit `q` in basis index `i` is `(i >> (n-1-q)) & 1`.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::{Error, Result};

use super::matrix::ComplexMatrix;

/// A normalized state vector on `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl PureState {
    /// `|0...0⟩` on `num_qubits`.
    pub fn zero_state(num_qubits: usize) -> Self {
        let mut amps = vec![Complex64::ZERO; 1 << num_qubits];
        amps[0] = Complex64::ONE;
        Self { num_qubits, amps }
    }

    /// Build from amplitudes; the 2-norm must be 1 within 1e-10.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim == 0 || dim & (dim - 1) != 0 {
            return Err(Error::DimensionMismatch { expected: dim.next_power_of_two(), got: dim });
        }
        let num_qubits = dim.trailing_zeros() as usize;
        let norm: f64 = libm::sqrt(amps.iter().map(|a| a.norm_sqr()).sum::<f64>());
        if libm::fabs(norm - 1.0) > 1e-10 {
            return Err(Error::NumericalFailure("state vector is not normalized"));
        }
        Ok(Self { num_qubits, amps })
    }

    /// Wrap a coefficient vector without the normalization check; used
    /// internally for operator columns.
    pub(crate) fn raw(num_qubits: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << num_qubits);
        Self { num_qubits, amps }
    }

    /// Wrap a coefficient vector, renormalizing it first.
    pub(crate) fn raw_normalized(num_qubits: usize, mut amps: Vec<Complex64>) -> Self {
        let norm = libm::sqrt(amps.iter().map(|a| a.norm_sqr()).sum::<f64>());
        for a in amps.iter_mut() {
            *a /= Complex64::new(norm, 0.0);
        }
        Self::raw(num_qubits, amps)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        debug_assert_eq!(self.num_qubits, other.num_qubits);
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `self ⊗ other`; `self`'s qubits become the most significant.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amps = vec![Complex64::ZERO; self.dim() * other.dim()];
        for (i, a) in self.amps.iter().enumerate() {
            for (j, b) in other.amps.iter().enumerate() {
                amps[i * other.dim() + j] = a * b;
            }
        }
        Self { num_qubits: self.num_qubits + other.num_qubits, amps }
    }

    /// Apply a `2^k`-dimensional unitary to the listed qubits (identity on
    /// the rest). `qubits[0]` is the most significant index bit of `u`.
    pub fn apply_unitary(&mut self, u: &ComplexMatrix, qubits: &[usize]) -> Result<()> {
        let plan = SubsetPlan::new(self.num_qubits, qubits, u)?;
        plan.apply_vec(&mut self.amps, u, false);
        Ok(())
    }

    /// Matrix-vector application of `u` on the full register.
    pub fn apply_full(&mut self, u: &ComplexMatrix) -> Result<()> {
        if u.rows() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: u.rows() });
        }
        self.amps = u.apply_to(&self.amps);
        Ok(())
    }
}

/// A density matrix on `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn from_pure(psi: &PureState) -> Self {
        let d = psi.dim();
        let mut mat = ComplexMatrix::zeros(d, d);
        for r in 0..d {
            for c in 0..d {
                mat.set(r, c, psi.amplitudes()[r] * psi.amplitudes()[c].conj());
            }
        }
        Self { num_qubits: psi.num_qubits(), mat }
    }

    pub fn zero_state(num_qubits: usize) -> Self {
        Self::from_pure(&PureState::zero_state(num_qubits))
    }

    pub fn maximally_mixed(num_qubits: usize) -> Self {
        let d = 1usize << num_qubits;
        let m = ComplexMatrix::identity(d).scale(Complex64::new(1.0 / d as f64, 0.0));
        Self { num_qubits, mat: m }
    }

    /// Wrap an existing matrix; dimensions must be a power of two.
    pub fn from_matrix(mat: ComplexMatrix) -> Result<Self> {
        let d = mat.rows();
        if !mat.is_square() || d == 0 || d & (d - 1) != 0 {
            return Err(Error::DimensionMismatch { expected: d.next_power_of_two(), got: mat.cols() });
        }
        Ok(Self { num_qubits: d.trailing_zeros() as usize, mat })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn matrix_mut(&mut self) -> &mut ComplexMatrix {
        &mut self.mat
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.trace()
    }

    /// `Tr(ρ²)`, real part.
    pub fn purity(&self) -> f64 {
        let d = self.dim();
        let mut acc = Complex64::ZERO;
        for r in 0..d {
            for c in 0..d {
                acc += self.mat.get(r, c) * self.mat.get(c, r);
            }
        }
        acc.re
    }

    /// `self ⊗ other`; `self`'s qubits become the most significant.
    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            num_qubits: self.num_qubits + other.num_qubits,
            mat: super::matrix::kron(&self.mat, &other.mat),
        }
    }

    /// Conjugation `ρ ← U ρ U†` with `u` acting on the listed qubits.
    pub fn apply_unitary(&mut self, u: &ComplexMatrix, qubits: &[usize]) -> Result<()> {
        let plan = SubsetPlan::new(self.num_qubits, qubits, u)?;
        plan.apply_density(&mut self.mat, u);
        Ok(())
    }

    /// Reduced state after discarding the listed qubits; the qubit order of
    /// the survivors is preserved.
    pub fn partial_trace(&self, discard: &[usize]) -> Result<DensityMatrix> {
        let n = self.num_qubits;
        validate_qubits(n, discard)?;
        if discard.len() >= n {
            return Err(Error::Unsupported("cannot discard every qubit"));
        }
        let keep: Vec<usize> = (0..n).filter(|q| !discard.contains(q)).collect();
        let nk = keep.len();
        let nd = discard.len();
        // bit positions (from LSB) of kept/discarded qubits
        let keep_pos: Vec<usize> = keep.iter().map(|q| n - 1 - q).collect();
        let disc_pos: Vec<usize> = discard.iter().map(|q| n - 1 - q).collect();
        let spread = |bits: usize, pos: &[usize], count: usize| -> usize {
            let mut out = 0usize;
            for (j, p) in pos.iter().enumerate() {
                out |= ((bits >> (count - 1 - j)) & 1) << p;
            }
            out
        };
        let mut out = ComplexMatrix::zeros(1 << nk, 1 << nk);
        for a in 0..(1usize << nk) {
            let abits = spread(a, &keep_pos, nk);
            for b in 0..(1usize << nk) {
                let bbits = spread(b, &keep_pos, nk);
                let mut acc = Complex64::ZERO;
                for e in 0..(1usize << nd) {
                    let ebits = spread(e, &disc_pos, nd);
                    acc += self.mat.get(abits | ebits, bbits | ebits);
                }
                out.set(a, b, acc);
            }
        }
        Ok(DensityMatrix { num_qubits: nk, mat: out })
    }

    /// Check the density-matrix invariants: Hermitian within `1e-10`,
    /// unit trace within `1e-10`, eigenvalues ≥ `-1e-9`.
    pub fn validate(&self) -> Result<()> {
        self.mat.require_hermitian(1e-10)?;
        let tr = self.trace();
        if libm::fabs(tr.re - 1.0) > 1e-10 || libm::fabs(tr.im) > 1e-10 {
            return Err(Error::NumericalFailure("density matrix trace is not 1"));
        }
        let (w, _) = super::eig::eigh(&self.mat)?;
        if w.iter().any(|&x| x < -1e-9) {
            return Err(Error::NumericalFailure("density matrix has a negative eigenvalue"));
        }
        Ok(())
    }
}

/// `⟨φ|ρ|φ⟩`, clamped to [0, 1].
pub fn fidelity(phi: &PureState, rho: &DensityMatrix) -> Result<f64> {
    if phi.num_qubits() != rho.num_qubits() {
        return Err(Error::DimensionMismatch { expected: phi.dim(), got: rho.dim() });
    }
    let v = rho.matrix().apply_to(phi.amplitudes());
    let f: Complex64 = phi.amplitudes().iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
    debug_assert!(libm::fabs(f.im) < 1e-9, "fidelity has imaginary part {}", f.im);
    Ok(f.re.clamp(0.0, 1.0))
}

fn validate_qubits(num_qubits: usize, qubits: &[usize]) -> Result<()> {
    for (i, &q) in qubits.iter().enumerate() {
        if q >= num_qubits {
            return Err(Error::QubitOutOfRange { qubit: q, num_qubits });
        }
        if qubits[..i].contains(&q) {
            return Err(Error::DuplicateQubit(q));
        }
    }
    Ok(())
}

/// Gather/scatter plan for applying a `2^k` operator to `k` chosen qubits of
/// an `n`-qubit register.
struct SubsetPlan {
    /// offsets into the state vector for each of the 2^k sub-basis states
    offsets: Vec<usize>,
    /// enumeration of base indices (all non-target bits)
    rest_pos: Vec<usize>,
    n: usize,
    k: usize,
}

impl SubsetPlan {
    fn new(n: usize, qubits: &[usize], u: &ComplexMatrix) -> Result<Self> {
        validate_qubits(n, qubits)?;
        let k = qubits.len();
        if u.rows() != (1 << k) || u.cols() != (1 << k) {
            return Err(Error::DimensionMismatch { expected: 1 << k, got: u.rows() });
        }
        let target_pos: Vec<usize> = qubits.iter().map(|q| n - 1 - q).collect();
        let rest_pos: Vec<usize> =
            (0..n).rev().filter(|p| !target_pos.contains(p)).collect();
        let mut offsets = vec![0usize; 1 << k];
        for x in 0..(1usize << k) {
            let mut off = 0usize;
            for (j, p) in target_pos.iter().enumerate() {
                off |= ((x >> (k - 1 - j)) & 1) << p;
            }
            offsets[x] = off;
        }
        Ok(Self { offsets, rest_pos, n, k })
    }

    fn base_indices(&self) -> impl Iterator<Item = usize> + '_ {
        let nrest = self.n - self.k;
        (0..(1usize << nrest)).map(move |m| {
            let mut base = 0usize;
            for (j, p) in self.rest_pos.iter().enumerate() {
                base |= ((m >> (nrest - 1 - j)) & 1) << p;
            }
            base
        })
    }

    /// In-place `v ← U v` (or `v ← conj(U) v` when `conjugate`).
    fn apply_vec(&self, v: &mut [Complex64], u: &ComplexMatrix, conjugate: bool) {
        let dk = 1usize << self.k;
        let mut scratch = vec![Complex64::ZERO; dk];
        for base in self.base_indices() {
            for (x, s) in scratch.iter_mut().enumerate() {
                *s = v[base + self.offsets[x]];
            }
            for r in 0..dk {
                let mut acc = Complex64::ZERO;
                for (x, s) in scratch.iter().enumerate() {
                    let m = u.get(r, x);
                    acc += if conjugate { m.conj() * s } else { m * s };
                }
                v[base + self.offsets[r]] = acc;
            }
        }
    }

    /// In-place `ρ ← U ρ U†`.
    fn apply_density(&self, rho: &mut ComplexMatrix, u: &ComplexMatrix) {
        let dim = rho.rows();
        let dk = 1usize << self.k;
        let mut scratch = vec![Complex64::ZERO; dk];
        // left multiply: each column transformed over its row index
        for col in 0..dim {
            for base in self.base_indices() {
                for (x, s) in scratch.iter_mut().enumerate() {
                    *s = rho.get(base + self.offsets[x], col);
                }
                for r in 0..dk {
                    let mut acc = Complex64::ZERO;
                    for (x, s) in scratch.iter().enumerate() {
                        acc += u.get(r, x) * s;
                    }
                    rho.set(base + self.offsets[r], col, acc);
                }
            }
        }
        // right multiply by U†: each row transformed with conj(U) over its column index
        for row in 0..dim {
            for base in self.base_indices() {
                for (x, s) in scratch.iter_mut().enumerate() {
                    *s = rho.get(row, base + self.offsets[x]);
                }
                for r in 0..dk {
                    let mut acc = Complex64::ZERO;
                    for (x, s) in scratch.iter().enumerate() {
                        acc += u.get(r, x).conj() * s;
                    }
                    rho.set(row, base + self.offsets[r], acc);
                }
            }
        }
    }
}
