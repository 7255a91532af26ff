use nalgebra::DMatrix;
use num_complex::Complex64;

use super::NORM_TOLERANCE;
use crate::{linalg, Error, Result};

/// Hermitian operator on an ordered qubit subset (`qubits[b]` is bit `b` of
/// the matrix index).
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: DMatrix<Complex64>,
    qubits: Vec<usize>,
}

impl Observable {
    pub fn new(matrix: DMatrix<Complex64>, qubits: &[usize]) -> Result<Self> {
        if qubits.is_empty() {
            return Err(Error::Domain(
                "observable must act on at least one qubit".into(),
            ));
        }
        let dim = 1usize << qubits.len();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::Shape(format!(
                "{}×{} observable does not match {} qubit(s)",
                matrix.nrows(),
                matrix.ncols(),
                qubits.len()
            )));
        }
        if !linalg::is_hermitian(&matrix, NORM_TOLERANCE) {
            return Err(Error::Validation("observable is not Hermitian".into()));
        }
        Ok(Self {
            matrix,
            qubits: qubits.to_vec(),
        })
    }

    /// Pauli Z on one qubit.
    pub fn z(qubit: usize) -> Self {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(-1.0, 0.0),
            ],
        );
        Self {
            matrix: m,
            qubits: vec![qubit],
        }
    }

    /// `alpha·self + beta·other`; both must act on the same qubit list.
    pub fn linear_combination(&self, alpha: f64, other: &Observable, beta: f64) -> Result<Self> {
        if self.qubits != other.qubits {
            return Err(Error::Shape("observables act on different qubits".into()));
        }
        Ok(Self {
            matrix: self.matrix.map(|v| v * alpha) + other.matrix.map(|v| v * beta),
            qubits: self.qubits.clone(),
        })
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    /// Largest eigenvalue magnitude.
    pub fn spectral_radius(&self) -> f64 {
        self.matrix
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .fold(0.0f64, |acc, v| acc.max(v.abs()))
    }

    pub(crate) fn check_register(&self, n_qubits: usize) -> Result<()> {
        for (i, &q) in self.qubits.iter().enumerate() {
            if q >= n_qubits {
                return Err(Error::Domain(format!(
                    "observable qubit {q} out of range for {n_qubits}-qubit register"
                )));
            }
            if self.qubits[..i].contains(&q) {
                return Err(Error::Domain(format!("observable lists qubit {q} twice")));
            }
        }
        Ok(())
    }
}
