//! Small dense linear algebra shared by the quantum routines and their oracles.
//!
//! Linear solves are hand-written partial-pivot Gaussian elimination so that
//! they stay independent of the simulator paths they are checked against.
//! Hermitian eigendecomposition is delegated to `nalgebra`.

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex64;

use crate::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Pivots at or below this fraction of the largest entry count as zero.
pub const PIVOT_TOLERANCE: f64 = 1e-12;

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    m.is_square()
        && (0..m.nrows())
            .all(|i| (0..m.ncols()).all(|j| (m[(i, j)] - m[(j, i)].conj()).norm() <= tol))
}

pub fn is_unitary(m: &CMatrix, tol: f64) -> bool {
    if !m.is_square() {
        return false;
    }
    let product = m.adjoint() * m;
    let n = m.nrows();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let expected = if i == j { 1.0 } else { 0.0 };
            (product[(i, j)] - Complex64::new(expected, 0.0)).norm() <= tol
        })
    })
}

pub fn to_complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|v| Complex64::new(v, 0.0))
}

pub fn to_complex_vec(v: &[f64]) -> CVector {
    DVector::from_iterator(v.len(), v.iter().map(|&x| Complex64::new(x, 0.0)))
}

/// Solves `a·x = b` by Gaussian elimination with partial pivoting.
pub fn solve<T>(a: &DMatrix<T>, b: &DVector<T>) -> Result<DVector<T>>
where
    T: ComplexField<RealField = f64> + Copy,
{
    let n = a.nrows();
    if !a.is_square() {
        return Err(Error::Shape(format!(
            "{}×{} matrix is not square",
            a.nrows(),
            a.ncols()
        )));
    }
    if b.len() != n {
        return Err(Error::Shape(format!(
            "rhs length {} does not match order {n}",
            b.len()
        )));
    }
    let scale = a.iter().fold(0.0f64, |acc, v| acc.max(v.modulus()));
    if scale == 0.0 {
        return Err(Error::Singular("zero matrix".into()));
    }
    let mut m = a.clone();
    let mut rhs = b.clone();
    for col in 0..n {
        let (pivot_row, pivot_mag) =
            (col..n)
                .map(|r| (r, m[(r, col)].modulus()))
                .fold(
                    (col, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        if pivot_mag <= PIVOT_TOLERANCE * scale {
            return Err(Error::Singular(format!(
                "pivot {pivot_mag:e} in column {col} below tolerance"
            )));
        }
        if pivot_row != col {
            m.swap_rows(pivot_row, col);
            rhs.swap_rows(pivot_row, col);
        }
        let pivot = m[(col, col)];
        for r in col + 1..n {
            let factor = m[(r, col)] / pivot;
            if factor.modulus() == 0.0 {
                continue;
            }
            for c in col..n {
                let v = m[(col, c)];
                m[(r, c)] -= factor * v;
            }
            let v = rhs[col];
            rhs[r] -= factor * v;
        }
    }
    let mut x = rhs;
    for row in (0..n).rev() {
        let mut acc = x[row];
        for c in row + 1..n {
            acc -= m[(row, c)] * x[c];
        }
        x[row] = acc / m[(row, row)];
    }
    Ok(x)
}

/// Eigenvalues (ascending) and unit eigenvectors (columns) of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn new(m: &CMatrix) -> Self {
        let eig = m.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors =
            CMatrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
        Self { values, vectors }
    }

    /// `V·diag(f(λ))·V†`.
    pub fn apply_function<F: Fn(f64) -> Complex64>(&self, f: F) -> CMatrix {
        let n = self.values.len();
        let diag = CMatrix::from_fn(n, n, |r, c| {
            if r == c {
                f(self.values[r])
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        &self.vectors * diag * self.vectors.adjoint()
    }

    pub fn min_abs(&self) -> f64 {
        self.values
            .iter()
            .fold(f64::INFINITY, |acc, v| acc.min(v.abs()))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

/// Euclidean norm of a complex slice.
pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}
