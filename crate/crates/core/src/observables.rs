//! Hermitian observables and the centered moment machinery behind every
//! bound.
//!
//! [`moment_table`] computes all first and second moments of an observable
//! list once; the bound evaluations then share that table so compared
//! bounds never see inconsistent rounding. The Gram matrix follows the
//! variance-operator convention: row j, column k holds the centered moment
//! <A_k A_j>, which makes it positive semidefinite for every state.

use crate::linalg::ComplexMatrix;
use crate::rng::SplitMix64;
use crate::states::DensityMatrix;
use num_complex::Complex64;
use thiserror::Error;

/// Largest tolerated imaginary residue on quantities that are real by
/// theory; anything above this indicates bad input rather than rounding.
pub const IMAG_TOL: f64 = 1e-10;
/// Variances may round slightly below zero before clamping.
pub const VARIANCE_FLOOR: f64 = -1e-12;

#[derive(Debug, Error)]
pub enum ObservableError {
    #[error("observable '{label}' is not Hermitian: residue {residue:.3e}")]
    NotHermitian { label: String, residue: f64 },
    #[error("dimension mismatch: state dim {state_dim}, observable dim {observable_dim}")]
    DimensionMismatch {
        state_dim: usize,
        observable_dim: usize,
    },
    #[error("imaginary residue {value:.3e} on {context} exceeds {IMAG_TOL:.0e}")]
    ImaginaryResidue { context: String, value: f64 },
    #[error("variance {value:.3e} below {VARIANCE_FLOOR:.0e}")]
    NegativeVariance { value: f64 },
    #[error("observable list is empty")]
    EmptyObservableList,
}

/// A labelled Hermitian observable.
#[derive(Debug, Clone)]
pub struct Observable {
    mat: ComplexMatrix,
    label: String,
}

impl Observable {
    pub fn new(mat: ComplexMatrix, label: impl Into<String>) -> Result<Self, ObservableError> {
        let label = label.into();
        let residue = mat.hermiticity_residue();
        if residue > IMAG_TOL {
            return Err(ObservableError::NotHermitian { label, residue });
        }
        Ok(Self { mat, label })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }
}

/// The three Pauli observables sigma_x, sigma_y, sigma_z.
pub fn pauli_set() -> Vec<Observable> {
    crate::basis::pauli()
        .into_iter()
        .zip(["sigma_x", "sigma_y", "sigma_z"])
        .map(|(m, label)| Observable::new(m, label).expect("Pauli matrices are Hermitian"))
        .collect()
}

/// The eight Gell-Mann observables lambda_1 .. lambda_8.
pub fn gellmann_set() -> Vec<Observable> {
    crate::basis::gellmann()
        .into_iter()
        .enumerate()
        .map(|(i, m)| {
            Observable::new(m, format!("lambda_{}", i + 1))
                .expect("Gell-Mann matrices are Hermitian")
        })
        .collect()
}

/// Gaussian Hermitian ensemble draw: (G + G^dagger)/2 with i.i.d. standard
/// complex Gaussian entries in G.
pub fn sample_hermitian(rng: &mut SplitMix64, dim: usize, label: impl Into<String>) -> Observable {
    let entries = (0..dim * dim)
        .map(|_| {
            let (re, im) = rng.next_gaussian_pair();
            Complex64::new(re, im)
        })
        .collect();
    let g = ComplexMatrix::new(dim, entries).expect("finite Gaussian entries");
    let h = g
        .add(&g.adjoint())
        .expect("matching dims")
        .scale(Complex64::new(0.5, 0.0));
    Observable::new(h, label).expect("(G + G^dagger)/2 is Hermitian")
}

fn check_dims(rho: &DensityMatrix, a: &Observable) -> Result<(), ObservableError> {
    if rho.dim() != a.dim() {
        return Err(ObservableError::DimensionMismatch {
            state_dim: rho.dim(),
            observable_dim: a.dim(),
        });
    }
    Ok(())
}

fn real_part(value: Complex64, context: &str) -> Result<f64, ObservableError> {
    if value.im.abs() > IMAG_TOL {
        return Err(ObservableError::ImaginaryResidue {
            context: context.to_string(),
            value: value.im.abs(),
        });
    }
    Ok(value.re)
}

/// `<A> = tr(A rho)`.
pub fn expectation(rho: &DensityMatrix, a: &Observable) -> Result<f64, ObservableError> {
    check_dims(rho, a)?;
    let t = a
        .matrix()
        .trace_product(rho.matrix())
        .expect("dims checked");
    real_part(t, &format!("<{}>", a.label()))
}

/// `(Delta A)^2 = <A^2> - <A>^2`, clamped to `[0, inf)`.
pub fn variance(rho: &DensityMatrix, a: &Observable) -> Result<f64, ObservableError> {
    check_dims(rho, a)?;
    let mean = expectation(rho, a)?;
    let a_sq = a.matrix().multiply(a.matrix()).expect("square");
    let second = real_part(
        a_sq.trace_product(rho.matrix()).expect("dims checked"),
        &format!("<{}^2>", a.label()),
    )?;
    let var = second - mean * mean;
    if var < VARIANCE_FLOOR {
        return Err(ObservableError::NegativeVariance { value: var });
    }
    Ok(var.max(0.0))
}

/// `<[A, B]> = <AB> - <BA>`; purely imaginary for Hermitian observables.
pub fn commutator_mean(
    rho: &DensityMatrix,
    a: &Observable,
    b: &Observable,
) -> Result<Complex64, ObservableError> {
    let (ab, ba) = ordered_second_moments(rho, a, b)?;
    Ok(ab - ba)
}

/// `<{A, B}> = <AB> + <BA>`; real for Hermitian observables.
pub fn anticommutator_mean(
    rho: &DensityMatrix,
    a: &Observable,
    b: &Observable,
) -> Result<Complex64, ObservableError> {
    let (ab, ba) = ordered_second_moments(rho, a, b)?;
    Ok(ab + ba)
}

fn ordered_second_moments(
    rho: &DensityMatrix,
    a: &Observable,
    b: &Observable,
) -> Result<(Complex64, Complex64), ObservableError> {
    check_dims(rho, a)?;
    check_dims(rho, b)?;
    if a.dim() != b.dim() {
        return Err(ObservableError::DimensionMismatch {
            state_dim: a.dim(),
            observable_dim: b.dim(),
        });
    }
    let b_rho = b.matrix().multiply(rho.matrix()).expect("dims checked");
    let a_rho = a.matrix().multiply(rho.matrix()).expect("dims checked");
    let ab = a.matrix().trace_product(&b_rho).expect("dims checked");
    let ba = b.matrix().trace_product(&a_rho).expect("dims checked");
    Ok((ab, ba))
}

/// Cached first and second moments of an observable list in one state.
#[derive(Debug, Clone)]
pub struct MomentTable {
    means: Vec<Complex64>,
    second_moments: ComplexMatrix,
    centered: ComplexMatrix,
    variances: Vec<f64>,
    gram: ComplexMatrix,
    labels: Vec<String>,
}

impl MomentTable {
    pub fn n(&self) -> usize {
        self.means.len()
    }

    /// <A_i>; imaginary parts already verified below [`IMAG_TOL`].
    pub fn means(&self) -> &[Complex64] {
        &self.means
    }

    /// Entry (j, k) holds <A_j A_k>.
    pub fn second_moments(&self) -> &ComplexMatrix {
        &self.second_moments
    }

    /// Entry (j, k) holds <A_j A_k> - <A_j><A_k>.
    pub fn centered(&self) -> &ComplexMatrix {
        &self.centered
    }

    /// Diagonal of the centered matrix, clamped to [0, inf).
    pub fn variances(&self) -> &[f64] {
        &self.variances
    }

    /// Product of the variances.
    pub fn variance_product(&self) -> f64 {
        self.variances.iter().product()
    }

    pub fn variance_sum(&self) -> f64 {
        self.variances.iter().sum()
    }

    /// The Gram matrix: entry (j, k) holds the centered <A_k A_j>.
    pub fn gram(&self) -> &ComplexMatrix {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// max |centered(j,k) - conj(centered(k,j))|, a rounding diagnostic.
    pub fn conjugate_symmetry_residue(&self) -> f64 {
        self.centered.hermiticity_residue()
    }
}

/// Compute every moment the bounds need for (state, observable list).
pub fn moment_table(
    rho: &DensityMatrix,
    observables: &[Observable],
) -> Result<MomentTable, ObservableError> {
    if observables.is_empty() {
        return Err(ObservableError::EmptyObservableList);
    }
    for a in observables {
        check_dims(rho, a)?;
    }
    let n = observables.len();

    // products A_k * rho feed both the means and the second moments
    let products: Vec<ComplexMatrix> = observables
        .iter()
        .map(|a| a.matrix().multiply(rho.matrix()).expect("dims checked"))
        .collect();

    let mut means = Vec::with_capacity(n);
    for (a, p) in observables.iter().zip(&products) {
        let t = p.trace();
        real_part(t, &format!("<{}>", a.label()))?;
        means.push(t);
    }

    let mut second_moments = ComplexMatrix::zeros(n);
    for (j, a) in observables.iter().enumerate() {
        for (k, p) in products.iter().enumerate() {
            // <A_j A_k> = tr(A_j (A_k rho))
            let m = a.matrix().trace_product(p).expect("dims checked");
            second_moments.set(j, k, m);
        }
    }

    let mut centered = ComplexMatrix::zeros(n);
    let mut gram = ComplexMatrix::zeros(n);
    let mut variances = Vec::with_capacity(n);
    for j in 0..n {
        for k in 0..n {
            let c = second_moments.get(j, k) - means[j] * means[k];
            centered.set(j, k, c);
            gram.set(k, j, c);
        }
    }
    for (j, a) in observables.iter().enumerate() {
        let diag = centered.get(j, j);
        let var = real_part(diag, &format!("variance of {}", a.label()))?;
        if var < VARIANCE_FLOOR {
            return Err(ObservableError::NegativeVariance { value: var });
        }
        variances.push(var.max(0.0));
    }

    Ok(MomentTable {
        means,
        second_moments,
        centered,
        variances,
        gram,
        labels: observables.iter().map(|a| a.label().to_string()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{qubit_from_bloch, random_pure, BlochVector};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn bloch_state(r: [f64; 3]) -> DensityMatrix {
        qubit_from_bloch(&BlochVector::qubit(r).unwrap()).unwrap()
    }

    fn maximally_mixed(dim: usize) -> DensityMatrix {
        let m = ComplexMatrix::identity(dim).scale(c(1.0 / dim as f64, 0.0));
        crate::states::from_matrix(m, 1e-10).unwrap()
    }

    #[test]
    fn pauli_commutator_and_anticommutator() {
        let p = pauli_set();
        let [sx, sy, sz] = crate::basis::pauli();
        // [sigma_x, sigma_y] = 2i sigma_z
        let comm = sx
            .multiply(&sy)
            .unwrap()
            .sub(&sy.multiply(&sx).unwrap())
            .unwrap();
        assert!(comm.max_abs_diff(&sz.scale(c(0.0, 2.0))) == 0.0);
        // {sigma_x, sigma_y} = 0
        let anti = sx
            .multiply(&sy)
            .unwrap()
            .add(&sy.multiply(&sx).unwrap())
            .unwrap();
        assert!(anti.max_abs_diff(&ComplexMatrix::zeros(2)) == 0.0);
        assert_eq!(p.len(), 3);
    }

    #[test]
    fn gellmann_structure_constants() {
        let gm = crate::basis::gellmann();
        // [l1, l2] = 2i l3  (f^{123} = 1)
        let comm12 = gm[0]
            .multiply(&gm[1])
            .unwrap()
            .sub(&gm[1].multiply(&gm[0]).unwrap())
            .unwrap();
        assert!(comm12.max_abs_diff(&gm[2].scale(c(0.0, 2.0))) < 1e-15);
        // [l4, l5] = 2i (1/2 l3 + sqrt(3)/2 l8)  (f^{345} = 1/2, f^{458} = sqrt(3)/2)
        let comm45 = gm[3]
            .multiply(&gm[4])
            .unwrap()
            .sub(&gm[4].multiply(&gm[3]).unwrap())
            .unwrap();
        let expected = gm[2]
            .scale(c(0.0, 1.0))
            .add(&gm[7].scale(c(0.0, 3.0f64.sqrt())))
            .unwrap();
        assert!(comm45.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn gellmann_pairs_do_not_all_anticommute() {
        // {l1, l4} = l6, not zero
        let gm = crate::basis::gellmann();
        let anti = gm[0]
            .multiply(&gm[3])
            .unwrap()
            .add(&gm[3].multiply(&gm[0]).unwrap())
            .unwrap();
        assert!(anti.max_abs_diff(&gm[5]) < 1e-15);
    }

    #[test]
    fn expectation_values() {
        let p = pauli_set();
        assert_eq!(expectation(&maximally_mixed(2), &p[2]).unwrap(), 0.0);
        let r = [0.3, -0.2, 0.7];
        let rho = bloch_state(r);
        for k in 0..3 {
            assert!((expectation(&rho, &p[k]).unwrap() - r[k]).abs() < 1e-14);
        }
        let gm = gellmann_set();
        assert!(expectation(&maximally_mixed(3), &gm[7]).unwrap().abs() < 1e-15);
    }

    #[test]
    fn expectation_dimension_mismatch() {
        let p = pauli_set();
        assert!(matches!(
            expectation(&maximally_mixed(3), &p[0]),
            Err(ObservableError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn variance_values() {
        let p = pauli_set();
        let r = [0.4, 0.1, -0.3];
        let rho = bloch_state(r);
        for k in 0..3 {
            assert!((variance(&rho, &p[k]).unwrap() - (1.0 - r[k] * r[k])).abs() < 1e-14);
        }
        // eigenstate of sigma_z has zero variance
        assert_eq!(variance(&bloch_state([0.0, 0.0, 1.0]), &p[2]).unwrap(), 0.0);
        // all Gell-Mann variances are 2/3 at the maximally mixed state
        let mm = maximally_mixed(3);
        for l in gellmann_set() {
            assert!((variance(&mm, &l).unwrap() - 2.0 / 3.0).abs() < 1e-14);
        }
    }

    #[test]
    fn commutator_means_on_bloch_states() {
        let p = pauli_set();
        let r = [0.25, -0.4, 0.55];
        let rho = bloch_state(r);
        let comm = commutator_mean(&rho, &p[0], &p[1]).unwrap();
        assert!((comm - c(0.0, 2.0 * r[2])).norm() < 1e-14);
        let anti = anticommutator_mean(&rho, &p[0], &p[1]).unwrap();
        assert!(anti.norm() < 1e-14);
        let self_comm = commutator_mean(&rho, &p[0], &p[0]).unwrap();
        assert_eq!(self_comm, c(0.0, 0.0));
    }

    #[test]
    fn moment_table_pauli_centered_entry() {
        let r = [0.3, 0.5, -0.2];
        let table = moment_table(&bloch_state(r), &pauli_set()).unwrap();
        // centered(x, y) = i r_z - r_x r_y
        let expected = c(-r[0] * r[1], r[2]);
        assert!((table.centered().get(0, 1) - expected).norm() < 1e-14);
        assert!(table.conjugate_symmetry_residue() < 1e-14);
    }

    #[test]
    fn moment_table_single_observable() {
        let p = pauli_set();
        let rho = bloch_state([0.3, 0.0, 0.4]);
        let table = moment_table(&rho, &p[0..1]).unwrap();
        assert_eq!(table.n(), 1);
        let var = variance(&rho, &p[0]).unwrap();
        assert!((table.gram().get(0, 0).re - var).abs() < 1e-14);
    }

    #[test]
    fn moment_table_rejects_empty_and_mismatched() {
        let rho = bloch_state([0.0, 0.0, 0.0]);
        assert!(matches!(
            moment_table(&rho, &[]),
            Err(ObservableError::EmptyObservableList)
        ));
        assert!(matches!(
            moment_table(&rho, &gellmann_set()),
            Err(ObservableError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn second_moments_reconstruct_from_comm_anti() {
        let mut rng = SplitMix64::new(77);
        for dim in 2..=4 {
            let rho = crate::states::sample_mixed(&mut rng, dim, dim);
            let obs: Vec<Observable> = (0..3)
                .map(|k| sample_hermitian(&mut rng, dim, format!("H{k}")))
                .collect();
            let table = moment_table(&rho, &obs).unwrap();
            for j in 0..3 {
                for k in 0..3 {
                    let comm = commutator_mean(&rho, &obs[j], &obs[k]).unwrap();
                    let anti = anticommutator_mean(&rho, &obs[j], &obs[k]).unwrap();
                    let rebuilt = (comm + anti) * c(0.5, 0.0);
                    assert!(
                        (table.second_moments().get(j, k) - rebuilt).norm() < 1e-12,
                        "dim {dim} ({j},{k})"
                    );
                }
            }
        }
    }

    #[test]
    fn gram_matches_centered_operator_inner_products() {
        // On a pure state the Gram entry (j, k) is
        // <psi| (A_k - <A_k>) (A_j - <A_j>) |psi>.
        let mut rng = SplitMix64::new(78);
        for dim in 2..=4 {
            let ket = crate::states::sample_ket(&mut rng, dim);
            let mut rho_m = ComplexMatrix::zeros(dim);
            for i in 0..dim {
                for j in 0..dim {
                    rho_m.set(i, j, ket[i] * ket[j].conj());
                }
            }
            let rho = crate::states::from_matrix(rho_m, 1e-10).unwrap();
            let obs: Vec<Observable> = (0..3)
                .map(|k| sample_hermitian(&mut rng, dim, format!("H{k}")))
                .collect();
            let table = moment_table(&rho, &obs).unwrap();

            let centered_ops: Vec<ComplexMatrix> = obs
                .iter()
                .zip(table.means())
                .map(|(a, mean)| {
                    a.matrix()
                        .sub(&ComplexMatrix::identity(dim).scale(*mean))
                        .unwrap()
                })
                .collect();
            let apply = |m: &ComplexMatrix| -> Vec<Complex64> {
                (0..dim)
                    .map(|i| (0..dim).map(|j| m.get(i, j) * ket[j]).sum())
                    .collect()
            };
            for j in 0..3 {
                for k in 0..3 {
                    let kj = apply(&centered_ops[j]);
                    let kk = apply(&centered_ops[k]);
                    // <psi| A_k A_j |psi> = <A_k psi, A_j psi> for Hermitian A_k
                    let inner: Complex64 = kk.iter().zip(&kj).map(|(x, y)| x.conj() * y).sum();
                    assert!(
                        (table.gram().get(j, k) - inner).norm() < 1e-12,
                        "dim {dim} ({j},{k})"
                    );
                }
            }
        }
    }

    #[test]
    fn gram_is_psd_on_random_pure_states() {
        let mut rng = SplitMix64::new(79);
        for _ in 0..100 {
            let rho = crate::states::sample_pure(&mut rng, 3);
            let obs: Vec<Observable> = (0..4)
                .map(|k| sample_hermitian(&mut rng, 3, format!("H{k}")))
                .collect();
            let table = moment_table(&rho, &obs).unwrap();
            let ev = table.gram().hermitian_eigenvalues(1e-8).unwrap();
            assert!(ev[0] >= -1e-10, "min gram eigenvalue {}", ev[0]);
        }
    }

    #[test]
    fn observable_constructor_rejects_non_hermitian() {
        let mut m = ComplexMatrix::zeros(2);
        m.set(0, 1, c(1.0, 0.0));
        assert!(matches!(
            Observable::new(m, "bad"),
            Err(ObservableError::NotHermitian { .. })
        ));
    }

    #[test]
    fn variance_of_random_states_nonnegative() {
        let mut rng = SplitMix64::new(80);
        for _ in 0..200 {
            let rho = crate::states::sample_mixed(&mut rng, 3, 2);
            let a = sample_hermitian(&mut rng, 3, "H");
            assert!(variance(&rho, &a).unwrap() >= 0.0);
        }
    }

    #[test]
    fn random_pure_mean_matches_ket_form() {
        // <A> via trace equals <psi|A|psi> on the projector
        let mut rng = SplitMix64::new(81);
        let rho = random_pure(4, 4242);
        let a = sample_hermitian(&mut rng, 4, "H");
        let tr = expectation(&rho, &a).unwrap();
        let direct = a.matrix().trace_product(rho.matrix()).unwrap();
        assert!((tr - direct.re).abs() < 1e-14);
    }
}
