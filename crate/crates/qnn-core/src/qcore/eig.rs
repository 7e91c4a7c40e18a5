//! Cyclic Jacobi eigensolvers for Hermitian and real symmetric matrices.
//!
//! The matrices diagonalized here are tiny (generators are at most a few
//! qubits wide, the KAK step works on 4×4), so the quadratically convergent
//! Jacobi iteration is both accurate and fast enough, and it is bitwise
//! deterministic across platforms, which the seeded-reproducibility contract
//! of this crate relies on.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::{Error, Result};

use super::matrix::ComplexMatrix;

const MAX_SWEEPS: usize = 60;

/// Eigendecomposition of a Hermitian matrix: returns eigenvalues in ascending
/// order and the matrix whose columns are the matching orthonormal
/// eigenvectors, so `h = V diag(w) V†`.
pub fn eigh(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    h.require_hermitian(1e-9)?;
    let n = h.rows();
    let mut a = h.clone();
    // Symmetrize exactly so roundoff in the input cannot bias the iteration.
    for r in 0..n {
        for c in 0..n {
            let v = (a.get(r, c) + a.get(c, r).conj()) * Complex64::new(0.5, 0.0);
            a.set(r, c, v);
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let scale = a.max_abs().max(1.0);
    let tol = 1e-15 * scale;

    for _ in 0..MAX_SWEEPS {
        let mut off: f64 = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a.get(p, q).norm());
            }
        }
        if off <= tol {
            let mut w: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
            sort_pairs(&mut w, &mut v);
            return Ok((w, v));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let mag = apq.norm();
                if mag <= tol {
                    continue;
                }
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = if theta >= 0.0 {
                    1.0 / (theta + libm::sqrt(theta * theta + 1.0))
                } else {
                    -1.0 / (-theta + libm::sqrt(theta * theta + 1.0))
                };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                let e = apq / Complex64::new(mag, 0.0);
                rotate(&mut a, &mut v, p, q, c, s, e);
            }
        }
    }
    Err(Error::NumericalFailure("Jacobi eigensolver did not converge"))
}

/// One two-sided Jacobi rotation `A ← J† A J`, `V ← V J`, with
/// `J[p][p]=J[q][q]=c`, `J[p][q]=s·e`, `J[q][p]=-s·conj(e)`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, c: f64, s: f64, e: Complex64) {
    let n = a.rows();
    let cc = Complex64::new(c, 0.0);
    let se = e * s;
    // columns: A ← A J
    for i in 0..n {
        let aip = a.get(i, p);
        let aiq = a.get(i, q);
        a.set(i, p, aip * cc - aiq * se.conj());
        a.set(i, q, aip * se + aiq * cc);
    }
    // rows: A ← J† A
    for j in 0..n {
        let apj = a.get(p, j);
        let aqj = a.get(q, j);
        a.set(p, j, apj * cc - aqj * se);
        a.set(q, j, apj * se.conj() + aqj * cc);
    }
    for i in 0..n {
        let vip = v.get(i, p);
        let viq = v.get(i, q);
        v.set(i, p, vip * cc - viq * se.conj());
        v.set(i, q, vip * se + viq * cc);
    }
}

fn sort_pairs(w: &mut [f64], v: &mut ComplexMatrix) {
    let n = w.len();
    // insertion sort; n is tiny and stability keeps the order deterministic
    for i in 1..n {
        let mut j = i;
        while j > 0 && w[j - 1] > w[j] {
            w.swap(j - 1, j);
            for r in 0..n {
                let a = v.get(r, j - 1);
                let b = v.get(r, j);
                v.set(r, j - 1, b);
                v.set(r, j, a);
            }
            j -= 1;
        }
    }
}

/// Eigendecomposition of a real symmetric matrix (row-major, `n × n`).
/// Returns ascending eigenvalues and the row-major orthogonal eigenvector
/// matrix `P` (columns are eigenvectors), so `m = P diag(w) Pᵀ`.
pub fn eigh_real_symmetric(n: usize, m: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    assert_eq!(m.len(), n * n);
    let mut a = m.to_vec();
    // exact symmetrization
    for r in 0..n {
        for c in 0..n {
            let v = 0.5 * (a[r * n + c] + a[c * n + r]);
            a[r * n + c] = v;
            a[c * n + r] = v;
        }
    }
    let mut v = vec![0.0f64; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = a.iter().fold(0.0f64, |acc, x| acc.max(libm::fabs(*x))).max(1.0);
    let tol = 1e-15 * scale;

    for _ in 0..MAX_SWEEPS {
        let mut off: f64 = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(libm::fabs(a[p * n + q]));
            }
        }
        if off <= tol {
            let mut w: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
            sort_pairs_real(n, &mut w, &mut v);
            return Ok((w, v));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if libm::fabs(apq) <= tol {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + libm::sqrt(theta * theta + 1.0))
                } else {
                    -1.0 / (-theta + libm::sqrt(theta * theta + 1.0))
                };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for i in 0..n {
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q];
                    a[i * n + p] = aip * c - aiq * s;
                    a[i * n + q] = aip * s + aiq * c;
                }
                for j in 0..n {
                    let apj = a[p * n + j];
                    let aqj = a[q * n + j];
                    a[p * n + j] = apj * c - aqj * s;
                    a[q * n + j] = apj * s + aqj * c;
                }
                for i in 0..n {
                    let vip = v[i * n + p];
                    let viq = v[i * n + q];
                    v[i * n + p] = vip * c - viq * s;
                    v[i * n + q] = vip * s + viq * c;
                }
            }
        }
    }
    Err(Error::NumericalFailure("real Jacobi eigensolver did not converge"))
}

fn sort_pairs_real(n: usize, w: &mut [f64], v: &mut [f64]) {
    for i in 1..n {
        let mut j = i;
        while j > 0 && w[j - 1] > w[j] {
            w.swap(j - 1, j);
            for r in 0..n {
                v.swap(r * n + (j - 1), r * n + j);
            }
            j -= 1;
        }
    }
}

/// `e^{-i·h·t}` for Hermitian `h`, via eigendecomposition `h = QΛQ†`.
pub fn expm_hermitian(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let (w, q) = eigh(h)?;
    Ok(expm_from_eigh(&w, &q, t))
}

/// `e^{-i·h·t}` from a precomputed eigendecomposition of `h`.
pub fn expm_from_eigh(w: &[f64], q: &ComplexMatrix, t: f64) -> ComplexMatrix {
    let n = w.len();
    let mut phased = q.clone();
    for (j, &wj) in w.iter().enumerate() {
        let ph = Complex64::new(libm::cos(-wj * t), libm::sin(-wj * t));
        for r in 0..n {
            phased.set(r, j, phased.get(r, j) * ph);
        }
    }
    phased.matmul(&q.dagger())
}
