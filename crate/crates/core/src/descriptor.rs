//! JSON descriptors for states and observables, the CLI input format.
//!
//! States:
//! ```json
//! {"kind":"dense","dim":d,"entries":[[re,im],...]}
//! {"kind":"bloch_qubit","r":[r1,r2,r3]}
//! {"kind":"bloch_qutrit","r":[r1,...,r8]}
//! {"kind":"bloch_qutrit_param","a":a,"alpha":alpha,"beta":beta}
//! ```
//! Dense entries are row-major. Observables (a single object or an array
//! of them; the named sets expand to sigma_x..sigma_z and
//! lambda_1..lambda_8):
//! ```json
//! {"kind":"dense","dim":d,"entries":...,"label":s}
//! {"kind":"pauli"}
//! {"kind":"gellmann"}
//! ```

use crate::linalg::ComplexMatrix;
use crate::observables::{gellmann_set, pauli_set, Observable};
use crate::states::{
    self, from_matrix, qutrit_param_components, BlochVector, DensityMatrix, StateError,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DescriptorError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Observable(#[from] crate::observables::ObservableError),
    #[error(transparent)]
    Linalg(#[from] crate::linalg::LinalgError),
}

impl DescriptorError {
    /// Parse/shape problems versus semantic validation failures; the CLI
    /// maps these to different exit codes.
    pub fn is_parse_error(&self) -> bool {
        matches!(self, DescriptorError::Json(_))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateDescriptor {
    Dense { dim: usize, entries: Vec<[f64; 2]> },
    BlochQubit { r: [f64; 3] },
    BlochQutrit { r: [f64; 8] },
    BlochQutritParam { a: f64, alpha: f64, beta: f64 },
}

impl StateDescriptor {
    pub fn parse(json: &str) -> Result<Self, DescriptorError> {
        Ok(serde_json::from_str(json)?)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            StateDescriptor::Dense { .. } => "dense",
            StateDescriptor::BlochQubit { .. } => "bloch_qubit",
            StateDescriptor::BlochQutrit { .. } => "bloch_qutrit",
            StateDescriptor::BlochQutritParam { .. } => "bloch_qutrit_param",
        }
    }

    /// The described matrix, with no state validation applied. Bloch
    /// inputs outside the unit ball still produce their formula matrix,
    /// which is what the validate command diagnoses.
    pub fn raw_matrix(&self) -> Result<ComplexMatrix, DescriptorError> {
        match self {
            StateDescriptor::Dense { dim, entries } => {
                let data = entries
                    .iter()
                    .map(|[re, im]| Complex64::new(*re, *im))
                    .collect();
                Ok(ComplexMatrix::new(*dim, data)?)
            }
            StateDescriptor::BlochQubit { r } => Ok(states::qubit_matrix(r)),
            StateDescriptor::BlochQutrit { r } => Ok(states::qutrit_matrix(r)),
            StateDescriptor::BlochQutritParam { a, alpha, beta } => Ok(states::qutrit_matrix(
                &qutrit_param_components(*a, *alpha, *beta),
            )),
        }
    }

    /// Bloch components when the descriptor is a Bloch form.
    pub fn bloch_components(&self) -> Option<Vec<f64>> {
        match self {
            StateDescriptor::Dense { .. } => None,
            StateDescriptor::BlochQubit { r } => Some(r.to_vec()),
            StateDescriptor::BlochQutrit { r } => Some(r.to_vec()),
            StateDescriptor::BlochQutritParam { a, alpha, beta } => {
                Some(qutrit_param_components(*a, *alpha, *beta).to_vec())
            }
        }
    }

    /// Validated density matrix.
    pub fn density(&self, tol: f64) -> Result<DensityMatrix, DescriptorError> {
        match self {
            StateDescriptor::Dense { .. } => Ok(from_matrix(self.raw_matrix()?, tol)?),
            StateDescriptor::BlochQubit { r } => {
                Ok(states::qubit_from_bloch(&BlochVector::qubit(*r)?)?)
            }
            StateDescriptor::BlochQutrit { r } => {
                Ok(states::qutrit_from_bloch(&BlochVector::qutrit(*r)?)?)
            }
            StateDescriptor::BlochQutritParam { a, alpha, beta } => Ok(states::qutrit_from_bloch(
                &BlochVector::qutrit_param(*a, *alpha, *beta)?,
            )?),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObservableDescriptor {
    Dense {
        dim: usize,
        entries: Vec<[f64; 2]>,
        label: String,
    },
    Pauli,
    Gellmann,
}

impl ObservableDescriptor {
    pub fn expand(&self) -> Result<Vec<Observable>, DescriptorError> {
        match self {
            ObservableDescriptor::Dense {
                dim,
                entries,
                label,
            } => {
                let data = entries
                    .iter()
                    .map(|[re, im]| Complex64::new(*re, *im))
                    .collect();
                let mat = ComplexMatrix::new(*dim, data)?;
                Ok(vec![Observable::new(mat, label.clone())?])
            }
            ObservableDescriptor::Pauli => Ok(pauli_set()),
            ObservableDescriptor::Gellmann => Ok(gellmann_set()),
        }
    }
}

/// Parse an observable source: one descriptor object or an array of them,
/// expanded and concatenated in order.
pub fn parse_observables(json: &str) -> Result<Vec<Observable>, DescriptorError> {
    let value: serde_json::Value = serde_json::from_str(json)?;
    let descriptors: Vec<ObservableDescriptor> = if value.is_array() {
        serde_json::from_value(value)?
    } else {
        vec![serde_json::from_value(value)?]
    };
    let mut out = Vec::new();
    for d in &descriptors {
        out.extend(d.expand()?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_state_kind() {
        let dense = StateDescriptor::parse(
            r#"{"kind":"dense","dim":2,"entries":[[0.5,0],[0,0],[0,0],[0.5,0]]}"#,
        )
        .unwrap();
        assert_eq!(dense.kind(), "dense");
        assert!(dense.density(1e-10).is_ok());

        let qubit = StateDescriptor::parse(r#"{"kind":"bloch_qubit","r":[0,0,1]}"#).unwrap();
        assert_eq!(qubit.density(1e-10).unwrap().dim(), 2);

        let qutrit =
            StateDescriptor::parse(r#"{"kind":"bloch_qutrit","r":[0,0,0,0,0,0,0,0]}"#).unwrap();
        assert_eq!(qutrit.density(1e-10).unwrap().dim(), 3);

        let param = StateDescriptor::parse(
            r#"{"kind":"bloch_qutrit_param","a":0.5,"alpha":0.3,"beta":0.9}"#,
        )
        .unwrap();
        assert_eq!(param.density(1e-10).unwrap().dim(), 3);
        assert_eq!(param.bloch_components().unwrap().len(), 8);
    }

    #[test]
    fn bad_json_is_a_parse_error() {
        let err = StateDescriptor::parse(r#"{"kind":"blochqubit","r":[0,0,1]}"#).unwrap_err();
        assert!(err.is_parse_error());
        let err = StateDescriptor::parse("not json").unwrap_err();
        assert!(err.is_parse_error());
    }

    #[test]
    fn invalid_state_is_a_validation_error() {
        let d = StateDescriptor::parse(r#"{"kind":"bloch_qubit","r":[0,0,1.5]}"#).unwrap();
        let err = d.density(1e-10).unwrap_err();
        assert!(!err.is_parse_error());
        assert!(matches!(
            err,
            DescriptorError::State(StateError::BlochNormViolation { .. })
        ));
    }

    #[test]
    fn dense_entry_count_checked() {
        let d = StateDescriptor::parse(r#"{"kind":"dense","dim":2,"entries":[[1,0]]}"#).unwrap();
        assert!(matches!(d.raw_matrix(), Err(DescriptorError::Linalg(_))));
    }

    #[test]
    fn observable_sets_expand() {
        assert_eq!(parse_observables(r#"{"kind":"pauli"}"#).unwrap().len(), 3);
        assert_eq!(
            parse_observables(r#"{"kind":"gellmann"}"#).unwrap().len(),
            8
        );
        let pair = parse_observables(
            r#"[{"kind":"dense","dim":2,"entries":[[1,0],[0,0],[0,0],[-1,0]],"label":"Z"},
                {"kind":"dense","dim":2,"entries":[[0,0],[1,0],[1,0],[0,0]],"label":"X"}]"#,
        )
        .unwrap();
        assert_eq!(pair.len(), 2);
        assert_eq!(pair[0].label(), "Z");
    }

    #[test]
    fn non_hermitian_dense_observable_rejected() {
        let err = parse_observables(
            r#"{"kind":"dense","dim":2,"entries":[[0,0],[1,0],[0,0],[0,0]],"label":"bad"}"#,
        )
        .unwrap_err();
        assert!(!err.is_parse_error());
    }
}
