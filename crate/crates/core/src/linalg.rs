//! Dense complex linear algebra for small square matrices (dim <= 16).
//!
//! Row-major storage, double precision throughout. Determinants use LU with
//! partial pivoting; Hermitian eigenvalues use cyclic Jacobi rotations,
//! which has no deflation corner cases at these sizes. All operations are
//! pure functions on immutable values.

use num_complex::Complex64;
use thiserror::Error;

/// Default entrywise tolerance for Hermiticity checks.
pub const HERMITICITY_TOL: f64 = 1e-10;

const MAX_JACOBI_SWEEPS: usize = 64;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix not Hermitian: max asymmetry {max_asymmetry:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { max_asymmetry: f64, tol: f64 },
    #[error("expected {expected} entries for dim {dim}, got {got}")]
    BadEntryCount {
        dim: usize,
        expected: usize,
        got: usize,
    },
    #[error("non-finite entry at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },
    #[error("matrix dimension must be positive")]
    ZeroDim,
}

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Build from row-major entries, validating shape and finiteness.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self, LinalgError> {
        if dim == 0 {
            return Err(LinalgError::ZeroDim);
        }
        if entries.len() != dim * dim {
            return Err(LinalgError::BadEntryCount {
                dim,
                expected: dim * dim,
                got: entries.len(),
            });
        }
        for (k, z) in entries.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(LinalgError::NonFiniteEntry {
                    row: k / dim,
                    col: k % dim,
                });
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Self {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &z) in diag.iter().enumerate() {
            m.set(i, i, z);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.dim + col] = value;
    }

    /// Exact matrix product in double precision.
    pub fn multiply(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.dim != other.dim {
            return Err(LinalgError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.dim != other.dim {
            return Err(LinalgError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            dim: self.dim,
            entries,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.dim != other.dim {
            return Err(LinalgError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            dim: self.dim,
            entries,
        })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    /// Sum of diagonal entries.
    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// trace(self * other) without forming the product, O(dim^2).
    pub fn trace_product(&self, other: &Self) -> Result<Complex64, LinalgError> {
        if self.dim != other.dim {
            return Err(LinalgError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let n = self.dim;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += self.get(i, j) * other.get(j, i);
            }
        }
        Ok(acc)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `max_{i,j} |a[i][j] - conj(a[j][i])|`.
    pub fn hermiticity_residue(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Largest entrywise distance to `other`; dimensions must agree.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Determinant via LU decomposition with partial pivoting.
    /// A singular matrix gives 0.
    pub fn determinant(&self) -> Complex64 {
        let n = self.dim;
        let mut a = self.entries.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            // pivot on the largest remaining modulus in this column
            let mut pivot_row = col;
            let mut best = a[col * n + col].norm_sqr();
            for row in col + 1..n {
                let mag = a[row * n + col].norm_sqr();
                if mag > best {
                    best = mag;
                    pivot_row = row;
                }
            }
            if best == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if pivot_row != col {
                for k in 0..n {
                    a.swap(col * n + k, pivot_row * n + k);
                }
                det = -det;
            }
            let pivot = a[col * n + col];
            det *= pivot;
            for row in col + 1..n {
                let factor = a[row * n + col] / pivot;
                for k in col..n {
                    let sub = factor * a[col * n + k];
                    a[row * n + k] -= sub;
                }
            }
        }
        det
    }

    /// All eigenvalues of a Hermitian matrix, sorted ascending.
    ///
    /// The input must be Hermitian within `tol` entrywise. Cyclic Jacobi
    /// rotations run until the off-diagonal Frobenius norm drops below
    /// `1e-13 * (1 + scale)` with scale the Frobenius norm of the input.
    pub fn hermitian_eigenvalues(&self, tol: f64) -> Result<Vec<f64>, LinalgError> {
        let residue = self.hermiticity_residue();
        if residue > tol {
            return Err(LinalgError::NotHermitian {
                max_asymmetry: residue,
                tol,
            });
        }
        let n = self.dim;
        let mut a = self.entries.clone();
        let threshold = 1e-13 * (1.0 + self.frobenius_norm());
        for _ in 0..MAX_JACOBI_SWEEPS {
            if off_diagonal_norm(&a, n) <= threshold {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    jacobi_rotate(&mut a, n, p, q);
                }
            }
        }
        let mut eigenvalues: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
        eigenvalues.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
        Ok(eigenvalues)
    }
}

fn off_diagonal_norm(a: &[Complex64], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[i * n + j].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One complex Jacobi rotation zeroing a[p][q] (and a[q][p]) by a unitary
/// similarity transform. Writing a[p][q] = r e^{i phi}, the phase is folded
/// into the rotation so the remaining 2x2 problem is real symmetric; the
/// rotation angle then follows the usual stable tangent formula.
fn jacobi_rotate(a: &mut [Complex64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r; // e^{i phi}
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let s_phase = phase * s;
    let s_phase_conj = phase.conj() * s;
    // columns: B = A J
    for i in 0..n {
        let aip = a[i * n + p];
        let aiq = a[i * n + q];
        a[i * n + p] = c * aip - s_phase_conj * aiq;
        a[i * n + q] = s_phase * aip + c * aiq;
    }
    // rows: A' = J^dagger B
    for j in 0..n {
        let apj = a[p * n + j];
        let aqj = a[q * n + j];
        a[p * n + j] = c * apj - s_phase * aqj;
        a[q * n + j] = s_phase_conj * apj + c * aqj;
    }
}
