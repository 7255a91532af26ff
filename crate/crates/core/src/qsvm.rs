//! Least-squares SVM: kernels, the bordered training system and prediction.
//!
//! Training solves
//!
//! ```text
//! [ 0   1ᵀ          ] [w₀]   [0]
//! [ 1   Ω + ridge·I ] [γ ] = [y]
//! ```
//!
//! with `Ω` the Gram matrix, and the decision function is
//! `sign(Σᵢ γᵢ k(xᵢ, x) + w₀)`. The labels enter only through the right-hand
//! side, so the multipliers `γᵢ` already carry their sign.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::dataset::TrainingSet;
use crate::hhl::{self, HhlConfig};
use crate::linalg::{self, to_complex, to_complex_vec};
use crate::sim::{swap_test, QuantumState};
use crate::vqc::{encode, FeatureMap};
use crate::{Error, Result};

pub const DEFAULT_RIDGE: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub enum KernelKind {
    Linear,
    /// `(x·x' + coef0)^degree`.
    Polynomial {
        degree: u32,
        coef0: f64,
    },
    /// `exp(−gamma·‖x − x'‖²)`.
    Rbf {
        gamma: f64,
    },
    /// `|⟨φ(x)|φ(x')⟩|²`.
    Quantum(FeatureMap),
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec {
    pub kind: KernelKind,
    /// Added to the Gram diagonal when the system is assembled.
    pub ridge: f64,
}

impl KernelSpec {
    pub fn new(kind: KernelKind, ridge: f64) -> Result<Self> {
        let spec = Self { kind, ridge };
        spec.validate()?;
        Ok(spec)
    }

    pub fn linear() -> Self {
        Self {
            kind: KernelKind::Linear,
            ridge: DEFAULT_RIDGE,
        }
    }

    pub fn rbf(gamma: f64) -> Result<Self> {
        Self::new(KernelKind::Rbf { gamma }, DEFAULT_RIDGE)
    }

    /// Quantum kernel with one qubit per feature and min-max scaling fitted to `data`.
    pub fn quantum_for(data: &TrainingSet) -> Result<Self> {
        Self::new(
            KernelKind::Quantum(FeatureMap::fit_angle(data)?),
            DEFAULT_RIDGE,
        )
    }

    pub fn with_ridge(self, ridge: f64) -> Result<Self> {
        Self::new(self.kind, ridge)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ridge.is_finite() && self.ridge >= 0.0) {
            return Err(Error::Validation(format!(
                "ridge {} must be nonnegative",
                self.ridge
            )));
        }
        match self.kind {
            KernelKind::Rbf { gamma } if !(gamma.is_finite() && gamma > 0.0) => Err(
                Error::Validation(format!("rbf gamma {gamma} must be positive")),
            ),
            KernelKind::Polynomial { degree, coef0 }
                if degree == 0 || !coef0.is_finite() || coef0 < 0.0 =>
            {
                Err(Error::Validation(format!(
                    "polynomial kernel needs degree ≥ 1 and coef0 ≥ 0, got {degree}, {coef0}"
                )))
            }
            _ => Ok(()),
        }
    }

    pub fn evaluate(&self, x: &[f64], x2: &[f64]) -> Result<f64> {
        if x.len() != x2.len() {
            return Err(Error::Shape(format!(
                "kernel inputs of length {} and {}",
                x.len(),
                x2.len()
            )));
        }
        let dot = || x.iter().zip(x2).map(|(a, b)| a * b).sum::<f64>();
        Ok(match &self.kind {
            KernelKind::Linear => dot(),
            KernelKind::Polynomial { degree, coef0 } => (dot() + coef0).powi(*degree as i32),
            KernelKind::Rbf { gamma } => {
                let d2: f64 = x.iter().zip(x2).map(|(a, b)| (a - b).powi(2)).sum();
                (-gamma * d2).exp()
            }
            KernelKind::Quantum(map) => quantum_kernel(x, x2, map)?,
        })
    }
}

/// `|⟨φ(x)|φ(x2)⟩|²` from the exact statevectors.
pub fn quantum_kernel(x: &[f64], x2: &[f64], map: &FeatureMap) -> Result<f64> {
    let a = encode(map, x)?;
    let b = encode(map, x2)?;
    Ok(a.inner(&b)?.norm_sqr().min(1.0))
}

/// The same overlap read off a simulated swap test: `2·p₀ − 1`.
pub fn quantum_kernel_swap_test(x: &[f64], x2: &[f64], map: &FeatureMap) -> Result<f64> {
    let a: QuantumState = encode(map, x)?;
    let b = encode(map, x2)?;
    Ok(2.0 * swap_test(&a, &b)? - 1.0)
}

/// Pairwise kernel values over the training inputs, without the ridge.
pub fn gram_matrix(data: &TrainingSet, kernel: &KernelSpec) -> Result<DMatrix<f64>> {
    kernel.validate()?;
    let rows: Vec<Vec<f64>> = data.rows().collect();
    let n = rows.len();
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = kernel.evaluate(&rows[i], &rows[j])?;
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    Ok(g)
}

/// Bordered matrix `[[0, 1ᵀ], [1, gram + ridge·I]]` and right-hand side `[0, y]`.
pub fn assemble_system(
    gram: &DMatrix<f64>,
    labels: &[i8],
    ridge: f64,
) -> Result<(DMatrix<f64>, DVector<f64>)> {
    let n = gram.nrows();
    if !gram.is_square() || labels.len() != n {
        return Err(Error::Shape(format!(
            "{}×{} Gram matrix with {} labels",
            gram.nrows(),
            gram.ncols(),
            labels.len()
        )));
    }
    let mut m = DMatrix::zeros(n + 1, n + 1);
    for i in 0..n {
        m[(0, i + 1)] = 1.0;
        m[(i + 1, 0)] = 1.0;
        for j in 0..n {
            m[(i + 1, j + 1)] = gram[(i, j)];
        }
        m[(i + 1, i + 1)] += ridge;
    }
    let mut rhs = DVector::zeros(n + 1);
    for (i, &y) in labels.iter().enumerate() {
        rhs[i + 1] = y as f64;
    }
    Ok((m, rhs))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Solver {
    Classical,
    /// HHL with the given clock size; evolution time and rotation constant
    /// are chosen by [`hhl::choose_config`].
    Hhl {
        clock_qubits: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LssvmModel {
    pub bias: f64,
    pub multipliers: Vec<f64>,
    pub kernel: KernelSpec,
    pub support_data: TrainingSet,
    pub solver: Solver,
    /// Post-selection probability of the HHL run, if any.
    pub success_probability: Option<f64>,
}

impl LssvmModel {
    /// `[w₀, γ₁, …, γ_N]`.
    pub fn coefficients(&self) -> Vec<f64> {
        std::iter::once(self.bias)
            .chain(self.multipliers.iter().copied())
            .collect()
    }
}

pub fn train(data: &TrainingSet, kernel: &KernelSpec, solver: Solver) -> Result<LssvmModel> {
    let gram = gram_matrix(data, kernel)?;
    let (m, rhs) = assemble_system(&gram, data.labels(), kernel.ridge)?;
    let singular = |e: Error| match e {
        Error::Singular(msg) => Error::Singular(format!("{msg}; try a ridge > 0")),
        other => other,
    };
    let (solution, success_probability) = match solver {
        Solver::Classical => (linalg::solve(&m, &rhs).map_err(singular)?, None),
        Solver::Hhl { clock_qubits } => {
            linalg::solve(&m, &rhs).map_err(singular)?;
            let (a, b) = hhl::pad_to_power_of_two(&to_complex(&m), &to_complex_vec(rhs.as_slice()));
            let system = hhl::make_hermitian(&a, &b)?;
            let config: HhlConfig = hhl::choose_config(&system, clock_qubits);
            let run = hhl::hhl_solve(&system, &config)?;
            let x = system.extract_solution(run.rescaled(&system).as_slice());
            let solution = DVector::from_iterator(
                m.nrows(),
                x.iter().take(m.nrows()).map(|c: &Complex64| c.re),
            );
            (solution, Some(run.success_probability))
        }
    };
    Ok(LssvmModel {
        bias: solution[0],
        multipliers: solution.iter().skip(1).copied().collect(),
        kernel: kernel.clone(),
        support_data: data.clone(),
        solver,
        success_probability,
    })
}

/// `Σᵢ γᵢ k(xᵢ, x) + w₀`.
pub fn decision_value(model: &LssvmModel, x: &[f64]) -> Result<f64> {
    if x.len() != model.support_data.n_features() {
        return Err(Error::Shape(format!(
            "model expects {} features, got {}",
            model.support_data.n_features(),
            x.len()
        )));
    }
    let mut acc = model.bias;
    for (g, xi) in model.multipliers.iter().zip(model.support_data.rows()) {
        acc += g * model.kernel.evaluate(&xi, x)?;
    }
    Ok(acc)
}

/// Sign of the decision value; exact zero maps to +1.
pub fn predict(model: &LssvmModel, x: &[f64]) -> Result<i8> {
    decision_value(model, x).map(crate::vqc::classify)
}

pub fn training_error(model: &LssvmModel) -> Result<f64> {
    crate::baselines::holdout_error(|x| predict(model, x), &model.support_data)
}

/// Relative Euclidean deviation `‖a − b‖ / ‖b‖`.
pub fn relative_difference(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt();
    let den: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    num / den
}
