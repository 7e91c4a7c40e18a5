//! Seeded random sampling: Haar-random unitaries and states, GUE matrices.
//!
//! All sampling goes through [`SeededRng`], a ChaCha12 stream with a fixed
//! draw order, so identical seeds reproduce identical values on every
//! platform.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::{Error, Result};

use super::matrix::ComplexMatrix;
use super::state::PureState;

/// Deterministic pseudo-random stream. Identical seeds yield identical
/// sample sequences across runs and platforms.
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    rng: ChaCha12Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self { seed, rng: ChaCha12Rng::seed_from_u64(seed) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Standard normal draw.
    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Uniform draw from `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Split off an independent child stream; used to give each training
    /// session or experiment cell its own generator.
    pub fn derive(&mut self) -> SeededRng {
        SeededRng::new(self.rng.next_u64())
    }
}

/// One standard complex Gaussian entry `(x + iy)/√2`, drawn real part first.
fn ginibre_entry(rng: &mut SeededRng) -> Complex64 {
    let re = rng.normal();
    let im = rng.normal();
    Complex64::new(re, im) * Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0)
}

/// Haar-random unitary of dimension `d`: QR of a complex Ginibre matrix with
/// the R-diagonal phase correction (Mezzadri's recipe). The QR step is
/// modified Gram-Schmidt with one re-orthogonalization pass.
pub fn sample_haar_unitary(d: usize, rng: &mut SeededRng) -> Result<ComplexMatrix> {
    if d < 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: d });
    }
    // Ginibre matrix, row-major draw order.
    let mut g = ComplexMatrix::zeros(d, d);
    for r in 0..d {
        for c in 0..d {
            g.set(r, c, ginibre_entry(rng));
        }
    }
    // Column-wise modified Gram-Schmidt on g; q holds the orthonormal frame.
    let mut q = g.clone();
    let mut rdiag = vec![Complex64::ZERO; d];
    for j in 0..d {
        for _pass in 0..2 {
            for i in 0..j {
                let mut dot = Complex64::ZERO;
                for r in 0..d {
                    dot += q.get(r, i).conj() * q.get(r, j);
                }
                for r in 0..d {
                    let v = q.get(r, j) - dot * q.get(r, i);
                    q.set(r, j, v);
                }
            }
        }
        let mut norm2 = 0.0;
        for r in 0..d {
            norm2 += q.get(r, j).norm_sqr();
        }
        let norm = libm::sqrt(norm2);
        for r in 0..d {
            q.set(r, j, q.get(r, j) / Complex64::new(norm, 0.0));
        }
        // r_jj = <q_j, g_j>; its phase is divided out of the column.
        let mut rjj = Complex64::ZERO;
        for r in 0..d {
            rjj += q.get(r, j).conj() * g.get(r, j);
        }
        rdiag[j] = rjj / Complex64::new(rjj.norm(), 0.0);
    }
    for j in 0..d {
        for r in 0..d {
            q.set(r, j, q.get(r, j) * rdiag[j]);
        }
    }
    Ok(q)
}

/// Haar-random pure state on `num_qubits`: a normalized complex Gaussian
/// vector, equivalently the first column of a Haar unitary.
pub fn sample_haar_state(num_qubits: usize, rng: &mut SeededRng) -> Result<PureState> {
    if num_qubits < 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: num_qubits });
    }
    let dim = 1usize << num_qubits;
    let mut amps: Vec<Complex64> = (0..dim).map(|_| ginibre_entry(rng)).collect();
    let norm = libm::sqrt(amps.iter().map(|a| a.norm_sqr()).sum::<f64>());
    for a in amps.iter_mut() {
        *a /= Complex64::new(norm, 0.0);
    }
    PureState::from_amplitudes(amps)
}

/// Random Hermitian matrix from the Gaussian unitary ensemble. Diagonal
/// entries are real normal(0, 1); off-diagonal entries have real and
/// imaginary parts normal(0, 1/2), sampled on the upper triangle row by row
/// and mirrored, so the result is Hermitian by construction.
pub fn sample_gue(d: usize, rng: &mut SeededRng) -> Result<ComplexMatrix> {
    if d < 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: d });
    }
    let mut h = ComplexMatrix::zeros(d, d);
    for r in 0..d {
        h.set(r, r, Complex64::new(rng.normal(), 0.0));
        for c in (r + 1)..d {
            let v = ginibre_entry(rng);
            h.set(r, c, v);
            h.set(c, r, v.conj());
        }
    }
    Ok(h)
}
