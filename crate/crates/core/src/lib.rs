//! Product-form variance uncertainty bounds for finite-dimensional
//! quantum observables.
//!
//! The library computes the variance product of n >= 2 Hermitian
//! observables in a quantum state together with its lower bounds: the
//! three-observable closed form and its commutator/anticommutator
//! rewriting, the general n-observable bound both as a Gram determinant
//! and as its combinatorial cycle-type expansion, the classic pair bounds,
//! the Pauli and Gell-Mann closed forms on Bloch-parameterized states, and
//! the arithmetic/geometric-mean corollary for variance sums.
//!
//! Everything rests on the positive semidefiniteness of the Gram matrix of
//! centered observables, so the determinant route doubles as an
//! independent oracle for every expanded form. The [`harness`] module
//! exposes the same machinery as a CLI with CSV/JSON output, figure-data
//! sweeps, and a seeded deterministic fuzz verifier.

pub mod basis;
pub mod bounds;
pub mod descriptor;
pub mod fuzz;
pub mod harness;
pub mod linalg;
pub mod observables;
pub mod rng;
pub mod states;

pub use bounds::{BoundName, BoundReport};
pub use linalg::ComplexMatrix;
pub use observables::{MomentTable, Observable};
pub use states::{BlochVector, DensityMatrix};
