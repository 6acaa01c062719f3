//! Density matrices: validation, Bloch parameterizations, random sampling.
//!
//! A [`DensityMatrix`] is only ever produced with its invariants checked or
//! guaranteed by construction: Hermitian within 1e-10 entrywise, unit trace
//! within 1e-10, and minimum eigenvalue >= -1e-10. Random states are drawn
//! from the deterministic [`crate::rng`] streams so every sample can be
//! replayed from its seed.

use crate::basis;
use crate::linalg::ComplexMatrix;
use crate::rng::SplitMix64;
use num_complex::Complex64;
use thiserror::Error;

/// Entrywise Hermiticity/trace tolerance for density matrix validation.
pub const DENSITY_TOL: f64 = 1e-10;
/// Absolute tolerance on the minimum eigenvalue.
pub const PSD_TOL: f64 = 1e-10;
/// Slack on the Bloch-ball norm constraint.
pub const BLOCH_NORM_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum StateError {
    #[error("Hermiticity violation: max |rho - rho^dagger| = {residue:.3e}")]
    HermiticityViolation { residue: f64 },
    #[error("trace violation: trace = {trace_re} + {trace_im}i, expected 1")]
    TraceViolation { trace_re: f64, trace_im: f64 },
    #[error("positivity violation: min eigenvalue = {min_eigenvalue:.6e}")]
    PositivityViolation { min_eigenvalue: f64 },
    #[error("Bloch vector norm {norm} exceeds 1")]
    BlochNormViolation { norm: f64 },
    #[error("Bloch vector length {len} unsupported (expected 3 or 8)")]
    BlochLength { len: usize },
    #[error("non-finite Bloch component")]
    NonFiniteBloch,
    #[error("expected dimension {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error(transparent)]
    Linalg(#[from] crate::linalg::LinalgError),
}

/// A validated quantum state.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }
}

/// Bloch coefficient vector: length 3 (qubit) or 8 (qutrit), norm <= 1.
///
/// For qutrits the norm constraint is necessary but not sufficient; the
/// eigenvalue check in [`qutrit_from_bloch`] decides actual validity.
#[derive(Debug, Clone)]
pub struct BlochVector {
    components: Vec<f64>,
}

impl BlochVector {
    pub fn new(components: Vec<f64>) -> Result<Self, StateError> {
        let len = components.len();
        if len != 3 && len != 8 {
            return Err(StateError::BlochLength { len });
        }
        if components.iter().any(|x| !x.is_finite()) {
            return Err(StateError::NonFiniteBloch);
        }
        let norm = components.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1.0 + BLOCH_NORM_TOL {
            return Err(StateError::BlochNormViolation { norm });
        }
        Ok(Self { components })
    }

    pub fn qubit(r: [f64; 3]) -> Result<Self, StateError> {
        Self::new(r.to_vec())
    }

    pub fn qutrit(r: [f64; 8]) -> Result<Self, StateError> {
        Self::new(r.to_vec())
    }

    /// The three-parameter qutrit family: components
    /// (a cos(alpha), 0, 0, a sin(alpha) cos(beta), 0, a sin(alpha) sin(beta), 0, 0).
    pub fn qutrit_param(a: f64, alpha: f64, beta: f64) -> Result<Self, StateError> {
        Self::new(qutrit_param_components(a, alpha, beta).to_vec())
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn norm(&self) -> f64 {
        self.components.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn as_qubit(&self) -> Option<[f64; 3]> {
        <[f64; 3]>::try_from(self.components.as_slice()).ok()
    }
}

pub fn qutrit_param_components(a: f64, alpha: f64, beta: f64) -> [f64; 8] {
    [
        a * alpha.cos(),
        0.0,
        0.0,
        a * alpha.sin() * beta.cos(),
        0.0,
        a * alpha.sin() * beta.sin(),
        0.0,
        0.0,
    ]
}

/// rho = (I + r . sigma) / 2, built without validation.
pub fn qubit_matrix(r: &[f64; 3]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2);
    m.set(0, 0, Complex64::new((1.0 + r[2]) / 2.0, 0.0));
    m.set(1, 1, Complex64::new((1.0 - r[2]) / 2.0, 0.0));
    m.set(0, 1, Complex64::new(r[0] / 2.0, -r[1] / 2.0));
    m.set(1, 0, Complex64::new(r[0] / 2.0, r[1] / 2.0));
    m
}

/// rho = (I + sqrt(3) r . lambda) / 3, built without validation.
pub fn qutrit_matrix(r: &[f64; 8]) -> ComplexMatrix {
    let mut m = ComplexMatrix::identity(3);
    let s3 = 3.0f64.sqrt();
    for (coeff, lam) in r.iter().zip(basis::gellmann()) {
        m = m
            .add(&lam.scale(Complex64::new(s3 * coeff, 0.0)))
            .expect("matching dims");
    }
    m.scale(Complex64::new(1.0 / 3.0, 0.0))
}

/// Validate a matrix as a density matrix.
///
/// Checks run in order Hermiticity, trace, positivity and report the first
/// violation together with the measured value.
pub fn from_matrix(m: ComplexMatrix, tol: f64) -> Result<DensityMatrix, StateError> {
    let residue = m.hermiticity_residue();
    if residue > tol {
        return Err(StateError::HermiticityViolation { residue });
    }
    let trace = m.trace();
    if ((trace.re - 1.0).powi(2) + trace.im.powi(2)).sqrt() > tol {
        return Err(StateError::TraceViolation {
            trace_re: trace.re,
            trace_im: trace.im,
        });
    }
    let eigenvalues = m.hermitian_eigenvalues(tol)?;
    let min_eigenvalue = eigenvalues[0];
    if min_eigenvalue < -tol {
        return Err(StateError::PositivityViolation { min_eigenvalue });
    }
    Ok(DensityMatrix { mat: m })
}

/// rho = (I + r . sigma) / 2 for a qubit Bloch vector.
pub fn qubit_from_bloch(r: &BlochVector) -> Result<DensityMatrix, StateError> {
    let comps = r.as_qubit().ok_or(StateError::BlochLength {
        len: r.components.len(),
    })?;
    // Hermitian and unit trace by construction; |r| <= 1 makes it PSD.
    Ok(DensityMatrix {
        mat: qubit_matrix(&comps),
    })
}

/// rho = (I + sqrt(3) r . lambda) / 3 for a qutrit Bloch vector.
///
/// The norm constraint carried by [`BlochVector`] is necessary but not
/// sufficient here, so the result goes through the full eigenvalue check.
pub fn qutrit_from_bloch(r: &BlochVector) -> Result<DensityMatrix, StateError> {
    let comps: [f64; 8] =
        <[f64; 8]>::try_from(r.components.as_slice()).map_err(|_| StateError::BlochLength {
            len: r.components.len(),
        })?;
    from_matrix(qutrit_matrix(&comps), DENSITY_TOL)
}

/// Bloch components of a qubit state: r_i = tr(rho sigma_i).
pub fn bloch_of_qubit(rho: &DensityMatrix) -> Result<BlochVector, StateError> {
    if rho.dim() != 2 {
        return Err(StateError::WrongDimension {
            expected: 2,
            got: rho.dim(),
        });
    }
    let mut r = [0.0; 3];
    for (ri, sigma) in r.iter_mut().zip(basis::pauli()) {
        let t = sigma
            .trace_product(rho.matrix())
            .expect("dims checked above");
        debug_assert!(t.im.abs() <= 1e-12, "imaginary Bloch component {}", t.im);
        *ri = t.re;
    }
    BlochVector::qubit(r)
}

/// A Haar-like random ket: i.i.d. standard complex Gaussian components,
/// normalized.
pub fn sample_ket(rng: &mut SplitMix64, dim: usize) -> Vec<Complex64> {
    assert!(dim >= 2, "state dimension must be at least 2");
    let mut ket: Vec<Complex64> = (0..dim)
        .map(|_| {
            let (re, im) = rng.next_gaussian_pair();
            Complex64::new(re, im)
        })
        .collect();
    let norm = ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut ket {
        *z /= norm;
    }
    ket
}

/// Pure state |psi><psi| from a sampled ket.
pub fn sample_pure(rng: &mut SplitMix64, dim: usize) -> DensityMatrix {
    let ket = sample_ket(rng, dim);
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            m.set(i, j, ket[i] * ket[j].conj());
        }
    }
    DensityMatrix { mat: m }
}

/// Ginibre-ensemble mixed state: rho = G G^dagger / tr(G G^dagger) with G
/// a dim x rank matrix of i.i.d. standard complex Gaussians.
pub fn sample_mixed(rng: &mut SplitMix64, dim: usize, rank: usize) -> DensityMatrix {
    assert!(dim >= 2, "state dimension must be at least 2");
    assert!(
        (1..=dim).contains(&rank),
        "rank must lie in 1..=dim, got {rank} for dim {dim}"
    );
    let g: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| {
            (0..rank)
                .map(|_| {
                    let (re, im) = rng.next_gaussian_pair();
                    Complex64::new(re, im)
                })
                .collect()
        })
        .collect();
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            let acc: Complex64 = g[i].iter().zip(&g[j]).map(|(a, b)| a * b.conj()).sum();
            m.set(i, j, acc);
        }
    }
    let trace = m.trace().re;
    DensityMatrix {
        mat: m.scale(Complex64::new(1.0 / trace, 0.0)),
    }
}

/// Seeded pure state; identical seeds give bit-identical output.
pub fn random_pure(dim: usize, seed: u64) -> DensityMatrix {
    sample_pure(&mut SplitMix64::new(seed), dim)
}

/// Seeded Ginibre mixed state; identical seeds give bit-identical output.
pub fn random_mixed(dim: usize, rank: usize, seed: u64) -> DensityMatrix {
    sample_mixed(&mut SplitMix64::new(seed), dim, rank)
}
