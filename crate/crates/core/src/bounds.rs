//! Product-form variance lower bounds.
//!
//! Everything here is a consequence of one fact: the Gram matrix M of the
//! centered observables is positive semidefinite, so det(M) >= 0 and the
//! variance product dominates `product - det(M)`. The three-observable
//! closed form ([`theorem1_bound`]), its commutator/anticommutator
//! rewriting, and the general n-observable cycle expansion
//! ([`theorem2_bound_cycles`]) are all evaluated independently of the LU
//! determinant route ([`gram_det_bound`]), which serves as the oracle the
//! expansions are checked against.

use crate::observables::MomentTable;
use crate::states::{qubit_from_bloch, qutrit_from_bloch, BlochVector, StateError};
use num_complex::Complex64;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Tightness means gap <= this times max(1, product).
pub const TIGHTNESS_REL_TOL: f64 = 1e-9;
/// Imaginary bookkeeping residue allowed on provably real sums.
pub const IMAG_TOL: f64 = 1e-10;
/// Cycle-type enumeration cap; beyond this use [`gram_det_bound`].
pub const MAX_CYCLE_OBSERVABLES: usize = 10;

#[derive(Debug, Error)]
pub enum BoundError {
    #[error("bound requires exactly {expected} observables, got {got}")]
    WrongObservableCount { expected: usize, got: usize },
    #[error("bound requires at least {min} observables, got {got}")]
    TooFewObservables { min: usize, got: usize },
    #[error("cycle expansion capped at {max} observables, got {got}; use the determinant bound")]
    TooManyObservables { max: usize, got: usize },
    #[error("observable index {index} out of range for {n} observables")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("imaginary residue {value:.3e} in {context} exceeds {tol:.1e}")]
    ImaginaryResidue {
        context: &'static str,
        value: f64,
        tol: f64,
    },
}

/// Names of every bound the library evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundName {
    Theorem1,
    Theorem1CommutatorForm,
    Theorem2Cycles,
    Theorem2Det,
    HeisenbergPair,
    SchrodingerPair,
    PauliTripleTight,
    SchrodingerTriple,
    PauliClosedForm,
    GellmannClosedForm,
    SumAmgm,
}

impl BoundName {
    pub const ALL: [BoundName; 11] = [
        BoundName::Theorem1,
        BoundName::Theorem1CommutatorForm,
        BoundName::Theorem2Cycles,
        BoundName::Theorem2Det,
        BoundName::HeisenbergPair,
        BoundName::SchrodingerPair,
        BoundName::PauliTripleTight,
        BoundName::SchrodingerTriple,
        BoundName::PauliClosedForm,
        BoundName::GellmannClosedForm,
        BoundName::SumAmgm,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            BoundName::Theorem1 => "theorem1",
            BoundName::Theorem1CommutatorForm => "theorem1_commutator_form",
            BoundName::Theorem2Cycles => "theorem2_cycles",
            BoundName::Theorem2Det => "theorem2_det",
            BoundName::HeisenbergPair => "heisenberg_pair",
            BoundName::SchrodingerPair => "schrodinger_pair",
            BoundName::PauliTripleTight => "pauli_triple_tight",
            BoundName::SchrodingerTriple => "schrodinger_triple",
            BoundName::PauliClosedForm => "pauli_closed_form",
            BoundName::GellmannClosedForm => "gellmann_closed_form",
            BoundName::SumAmgm => "sum_amgm",
        }
    }
}

impl fmt::Display for BoundName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BoundName::ALL
            .iter()
            .find(|b| b.as_str() == s)
            .copied()
            .ok_or_else(|| {
                let known: Vec<&str> = BoundName::ALL.iter().map(|b| b.as_str()).collect();
                format!("unknown bound '{s}'; expected one of {}", known.join(", "))
            })
    }
}

/// One evaluated bound next to the variance product it constrains.
///
/// `value` is the raw bound; a rounding-negative bound stays visible there,
/// with `value_clamped` as the vacuous-but-usable version.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub name: BoundName,
    pub product: f64,
    pub value: f64,
    pub value_clamped: f64,
    pub gap: f64,
    pub tight: bool,
}

impl BoundReport {
    pub fn new(name: BoundName, product: f64, value: f64) -> Self {
        let gap = product - value;
        Self {
            name,
            product,
            value,
            value_clamped: value.max(0.0),
            gap,
            tight: gap <= TIGHTNESS_REL_TOL * product.abs().max(1.0),
        }
    }
}

fn check_index(t: &MomentTable, index: usize) -> Result<(), BoundError> {
    if index >= t.n() {
        return Err(BoundError::IndexOutOfRange { index, n: t.n() });
    }
    Ok(())
}

fn require_n(t: &MomentTable, expected: usize) -> Result<(), BoundError> {
    if t.n() != expected {
        return Err(BoundError::WrongObservableCount {
            expected,
            got: t.n(),
        });
    }
    Ok(())
}

/// (1/4) |<[A_i, A_j]>|^2.
pub fn heisenberg_pair_bound(t: &MomentTable, i: usize, j: usize) -> Result<f64, BoundError> {
    check_index(t, i)?;
    check_index(t, j)?;
    let comm = t.second_moments().get(i, j) - t.second_moments().get(j, i);
    Ok(0.25 * comm.norm_sqr())
}

/// (1/4) |<[A_i, A_j]>|^2 + |(1/2)<{A_i, A_j}> - <A_i><A_j>|^2.
///
/// Algebraically identical to |centered(i, j)|^2; computed from the
/// commutator/anticommutator route so the identity stays testable.
pub fn schrodinger_pair_bound(t: &MomentTable, i: usize, j: usize) -> Result<f64, BoundError> {
    check_index(t, i)?;
    check_index(t, j)?;
    let s = t.second_moments();
    let comm = s.get(i, j) - s.get(j, i);
    let anti = s.get(i, j) + s.get(j, i);
    let corr = 0.5 * anti - t.means()[i] * t.means()[j];
    Ok(0.25 * comm.norm_sqr() + corr.norm_sqr())
}

/// Triple-product bound from the centered moments:
/// `v_A |<BC>|^2 + v_B |<CA>|^2 + v_C |<AB>|^2 - 2 Re(<AB><BC><CA>)`,
/// with every bracket centered. Equals product - det(M) for n = 3.
pub fn theorem1_bound(t: &MomentTable) -> Result<f64, BoundError> {
    require_n(t, 3)?;
    let v = t.variances();
    let c = t.centered();
    let c01 = c.get(0, 1);
    let c12 = c.get(1, 2);
    let c20 = c.get(2, 0);
    Ok(
        v[0] * c12.norm_sqr() + v[1] * c20.norm_sqr() + v[2] * c01.norm_sqr()
            - 2.0 * (c01 * c12 * c20).re,
    )
}

/// The same bound written out in commutator/anticommutator means: three
/// variance-weighted pair terms minus four triple products of
/// K_jk = <[A_j, A_k]> and D_jk = <{A_j, A_k}> - 2 <A_j><A_k>.
pub fn theorem1_bound_commutator_form(t: &MomentTable) -> Result<f64, BoundError> {
    require_n(t, 3)?;
    let s = t.second_moments();
    let mu = t.means();
    let v = t.variances();
    let comm = |j: usize, k: usize| s.get(j, k) - s.get(k, j);
    let dcorr = |j: usize, k: usize| s.get(j, k) + s.get(k, j) - 2.0 * mu[j] * mu[k];

    let k01 = comm(0, 1);
    let k12 = comm(1, 2);
    let k20 = comm(2, 0);
    let d01 = dcorr(0, 1);
    let d12 = dcorr(1, 2);
    let d20 = dcorr(2, 0);

    let mut total = Complex64::new(
        v[0] * 0.25 * (k12.norm_sqr() + d12.norm_sqr())
            + v[1] * 0.25 * (k20.norm_sqr() + d20.norm_sqr())
            + v[2] * 0.25 * (k01.norm_sqr() + d01.norm_sqr()),
        0.0,
    );
    total -= 0.25 * (d01 * d12 * d20);
    total -= 0.25 * (d01 * k12 * k20);
    total -= 0.25 * (k01 * d12 * k20);
    total -= 0.25 * (k01 * k12 * d20);

    let scale = total.re.abs().max(1.0);
    if total.im.abs() > IMAG_TOL * scale {
        return Err(BoundError::ImaginaryResidue {
            context: "commutator-form triple bound",
            value: total.im.abs(),
            tol: IMAG_TOL,
        });
    }
    Ok(total.re)
}

/// product - Re(det(M)): the determinant route to the n-observable bound,
/// and the oracle for the combinatorial expansion.
pub fn gram_det_bound(t: &MomentTable) -> Result<f64, BoundError> {
    let product = t.variance_product();
    let det = t.gram().determinant();
    let scale = product.abs().max(1.0);
    if det.im.abs() > IMAG_TOL * scale {
        return Err(BoundError::ImaginaryResidue {
            context: "Gram determinant",
            value: det.im.abs(),
            tol: IMAG_TOL,
        });
    }
    Ok(product - det.re)
}

/// One configuration of the determinant expansion: a set of fixed indices
/// whose variances multiply, and a partition of the rest into cycles of
/// length >= 2 evaluated as E-terms on the centered table.
#[derive(Debug, Clone)]
pub struct CycleTerm {
    pub fixed_set: Vec<usize>,
    pub cycle_partition: Vec<Vec<usize>>,
    /// Contribution to det(M); cycles are paired with their reversals, so
    /// the value is real up to rounding.
    pub value: Complex64,
}

/// Enumerate the cycle-type expansion of det(M).
///
/// Cycles are generated with their smallest index first; orientations are
/// merged by requiring second < last and adding the reversed E-term, so
/// each cycle enters through its real part. A cycle of length m carries
/// the permutation sign (-1)^(m-1). Summing all terms reproduces det(M);
/// subtracting from the variance product gives the bound.
pub fn cycle_terms(t: &MomentTable) -> Result<Vec<CycleTerm>, BoundError> {
    let n = t.n();
    if n < 2 {
        return Err(BoundError::TooFewObservables { min: 2, got: n });
    }
    if n > MAX_CYCLE_OBSERVABLES {
        return Err(BoundError::TooManyObservables {
            max: MAX_CYCLE_OBSERVABLES,
            got: n,
        });
    }
    let mut terms = Vec::new();
    let mut fixed = Vec::new();
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let full_mask: u32 = (1u32 << n) - 1;
    expand(t, full_mask, &mut fixed, &mut cycles, &mut terms);
    Ok(terms)
}

fn expand(
    t: &MomentTable,
    remaining: u32,
    fixed: &mut Vec<usize>,
    cycles: &mut Vec<Vec<usize>>,
    out: &mut Vec<CycleTerm>,
) {
    if remaining == 0 {
        out.push(make_term(t, fixed, cycles));
        return;
    }
    let i = remaining.trailing_zeros() as usize;
    let rest = remaining & !(1 << i);

    // i is a fixed point
    fixed.push(i);
    expand(t, rest, fixed, cycles, out);
    fixed.pop();

    // i opens a cycle; extend it with ordered picks from the rest
    let mut seq = vec![i];
    extend_cycle(t, rest, &mut seq, fixed, cycles, out);
}

fn extend_cycle(
    t: &MomentTable,
    available: u32,
    seq: &mut Vec<usize>,
    fixed: &mut Vec<usize>,
    cycles: &mut Vec<Vec<usize>>,
    out: &mut Vec<CycleTerm>,
) {
    let n = t.n();
    for j in 0..n {
        if available & (1 << j) == 0 {
            continue;
        }
        seq.push(j);
        let next = available & !(1 << j);
        // close here if canonical: a 2-cycle always is, longer cycles only
        // in the orientation with second < last (the reversal is folded in)
        if seq.len() == 2 || seq[1] < seq[seq.len() - 1] {
            cycles.push(seq.clone());
            expand(t, next, fixed, cycles, out);
            cycles.pop();
        }
        extend_cycle(t, next, seq, fixed, cycles, out);
        seq.pop();
    }
}

fn make_term(t: &MomentTable, fixed: &[usize], cycles: &[Vec<usize>]) -> CycleTerm {
    let c = t.centered();
    let mut value = Complex64::new(
        fixed.iter().map(|&i| t.variances()[i]).product::<f64>(),
        0.0,
    );
    for cycle in cycles {
        let m = cycle.len();
        let forward: Complex64 = (0..m)
            .map(|k| c.get(cycle[k], cycle[(k + 1) % m]))
            .product();
        let factor = if m == 2 {
            forward
        } else {
            let backward: Complex64 = (0..m)
                .map(|k| c.get(cycle[(k + 1) % m], cycle[k]))
                .product();
            forward + backward
        };
        // permutation sign of an m-cycle is (-1)^(m-1)
        value *= if m % 2 == 0 { -factor } else { factor };
    }
    CycleTerm {
        fixed_set: fixed.to_vec(),
        cycle_partition: cycles.to_vec(),
        value,
    }
}

/// The n-observable bound evaluated through the cycle-type expansion
/// rather than the determinant. Requires 2 <= n <= 10.
pub fn theorem2_bound_cycles(t: &MomentTable) -> Result<f64, BoundError> {
    let terms = cycle_terms(t)?;
    let det: Complex64 = terms.iter().map(|term| term.value).sum();
    let product = t.variance_product();
    let scale = product.abs().max(1.0);
    if det.im.abs() > IMAG_TOL * scale {
        return Err(BoundError::ImaginaryResidue {
            context: "cycle expansion",
            value: det.im.abs(),
            tol: IMAG_TOL,
        });
    }
    Ok(product - det.re)
}

/// Constant-sharpened Heisenberg triple bound for the Pauli set:
/// 8/(3 sqrt(3)) |r1 r2 r3|.
pub fn pauli_triple_tight_bound(r: [f64; 3]) -> f64 {
    8.0 / (3.0 * 3.0f64.sqrt()) * (r[0] * r[1] * r[2]).abs()
}

/// Product of the three pair correlation magnitudes,
/// `|<AB>| |<BC>| |<CA>|` over centered moments.
pub fn schrodinger_triple_bound(t: &MomentTable) -> Result<f64, BoundError> {
    require_n(t, 3)?;
    let c = t.centered();
    Ok(c.get(0, 1).norm() * c.get(1, 2).norm() * c.get(2, 0).norm())
}

/// Closed forms for the Pauli triple on a Bloch state: the variance
/// product (1 - r1^2)(1 - r2^2)(1 - r3^2) and its polynomial lower bound
/// sum r_i^2 - sum r_i^4 - sum_{i<j} r_i^2 r_j^2 - r1^2 r2^2 r3^2.
/// The gap between them is (1 - sum r_i^2)^2.
pub fn pauli_closed_form(r: [f64; 3]) -> (f64, f64) {
    let s: Vec<f64> = r.iter().map(|x| x * x).collect();
    let product = (1.0 - s[0]) * (1.0 - s[1]) * (1.0 - s[2]);
    let bound = (s[0] + s[1] + s[2])
        - (s[0] * s[0] + s[1] * s[1] + s[2] * s[2])
        - (s[0] * s[1] + s[0] * s[2] + s[1] * s[2])
        - s[0] * s[1] * s[2];
    (product, bound)
}

/// Closed forms for the Gell-Mann set on the three-parameter qutrit family.
#[derive(Debug, Clone, Copy)]
pub struct QutritClosedForm {
    /// (2/3)^8 (1 - 2 a^2 cos^2 a)(1 - 2 a^2 sin^2 a + a^4 sin^4 a sin^2 2b).
    pub product: f64,
    /// The tabulated polynomial lower bound with its first bracket using
    /// sin^2(beta).
    pub bound_printed: f64,
    /// Same bound with the first bracket read as sin^2(2 beta), matching
    /// the product formula's last factor.
    pub bound_alt: f64,
}

/// Evaluate the qutrit closed forms; the parameters must describe a valid
/// state (decided by the eigenvalue check).
pub fn gellmann_closed_form(a: f64, alpha: f64, beta: f64) -> Result<QutritClosedForm, StateError> {
    let bloch = BlochVector::qutrit_param(a, alpha, beta)?;
    qutrit_from_bloch(&bloch)?;

    let two_thirds_8 = (2.0f64 / 3.0).powi(8);
    let third_8 = (1.0f64 / 3.0).powi(8);
    let a2 = a * a;
    let ca2 = alpha.cos().powi(2);
    let sa2 = alpha.sin().powi(2);
    let sa4 = sa2 * sa2;
    let a4 = a2 * a2;
    let sin_2b_sq = (2.0 * beta).sin().powi(2);
    let sin_b_sq = beta.sin().powi(2);

    let last_factor = 1.0 - 2.0 * a2 * sa2 + a4 * sa4 * sin_2b_sq;
    let product = two_thirds_8 * (1.0 - 2.0 * a2 * ca2) * last_factor;

    let bound_with = |first_sin_sq: f64| -> f64 {
        let bracket = 256.0 * (1.0 - 2.0 * a2 * sa2 + a4 * sa4 * first_sin_sq)
            + (-2048.0 + 7168.0 * a2 - 6144.0 * a4 + 1359.0 * a2 * a4) / 8.0
            + a2 * (4096.0 - 6144.0 * a2 + 2385.0 * a4) * (2.0 * alpha).cos() / 16.0
            + 9.0 / 8.0 * a4 * (-108.0 + 105.0 * a2) * (4.0 * alpha).cos()
            - 81.0 / 16.0 * a4 * a * ((6.0 * alpha).cos() - 32.0 * ca2 * sa4 * (4.0 * beta).cos());
        third_8 * (1.0 - 2.0 * a2) * bracket + two_thirds_8 * 2.0 * a2 * sa2 * last_factor
    };

    Ok(QutritClosedForm {
        product,
        bound_printed: bound_with(sin_b_sq),
        bound_alt: bound_with(sin_2b_sq),
    })
}

/// Sum-of-variances corollary: sum (Delta A_i)^2 >= n bound^(1/n), from
/// the arithmetic/geometric mean inequality applied to the product bound.
pub fn sum_amgm_bound(t: &MomentTable) -> Result<f64, BoundError> {
    let n = t.n();
    if n < 2 {
        return Err(BoundError::TooFewObservables { min: 2, got: n });
    }
    let bound = gram_det_bound(t)?.max(0.0);
    Ok(n as f64 * bound.powf(1.0 / n as f64))
}

/// Evaluate the three comparable Pauli-triple bounds on one Bloch state:
/// the polynomial closed form, the constant-sharpened commutator bound,
/// and the pair-correlation product. All reports share the closed-form
/// variance product.
pub fn compare_pauli_bounds(r: [f64; 3]) -> Result<Vec<BoundReport>, StateError> {
    let bloch = BlochVector::qubit(r)?;
    let rho = qubit_from_bloch(&bloch)?;
    let table = crate::observables::moment_table(&rho, &crate::observables::pauli_set())
        .expect("Pauli moments on a Bloch state are exact");
    let (product, l7) = pauli_closed_form(r);
    let l10 = pauli_triple_tight_bound(r);
    let l11 = schrodinger_triple_bound(&table).expect("three observables");
    Ok(vec![
        BoundReport::new(BoundName::PauliClosedForm, product, l7),
        BoundReport::new(BoundName::PauliTripleTight, product, l10),
        BoundReport::new(BoundName::SchrodingerTriple, product, l11),
    ])
}
