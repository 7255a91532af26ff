//! HHL linear-system solver on the statevector simulator.
//!
//! Register layout for an `N = 2^n` system with `m` clock qubits:
//! system qubits `0..n`, clock qubits `n..n+m`, rotation ancilla `n+m`.
//!
//! The circuit is the textbook one: load `|b⟩`, phase-estimate `e^{iAt}` into
//! the clock, rotate the ancilla by `arcsin(C/λ̂)` conditioned on each clock
//! value, undo the phase estimation, then post-select analytically on
//! ancilla = 1 and clock = 0. `e^{iAt}` is built from the exact
//! eigendecomposition of `A`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::linalg::{self, CMatrix, CVector, HermitianEigen};
use crate::sim::{self, amplitude_encode, qft, GateOp, QuantumState};
use crate::{Error, Result};

/// Largest clock register picked automatically from a tolerance.
pub const MAX_AUTO_CLOCK_QUBITS: usize = 10;
pub const DEFAULT_CLOCK_QUBITS: usize = 6;
pub const DEFAULT_TOLERANCE: f64 = 1e-3;
/// `C = ROTATION_SAFETY · min|λ|` in [`choose_config`].
pub const ROTATION_SAFETY: f64 = 0.99;

/// How the original problem sits inside the Hermitian system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Embedding {
    /// `A` was Hermitian and is solved as is.
    Direct,
    /// `[[0, A], [A†, 0]]` with rhs `[b, 0]`; the solution of `A x = b` is the
    /// lower block of length `original_dim`.
    Dilated { original_dim: usize },
}

#[derive(Debug, Clone)]
pub struct HermitianSystem {
    matrix: CMatrix,
    rhs: CVector,
    eigen: HermitianEigen,
    condition_number: f64,
    sparsity: usize,
    embedding: Embedding,
}

impl HermitianSystem {
    /// Validates a Hermitian, nonsingular, power-of-two system with `b ≠ 0`.
    pub fn new(matrix: CMatrix, rhs: CVector) -> Result<Self> {
        Self::with_embedding(matrix, rhs, Embedding::Direct)
    }

    fn with_embedding(matrix: CMatrix, rhs: CVector, embedding: Embedding) -> Result<Self> {
        let n = matrix.nrows();
        if !matrix.is_square() || rhs.len() != n {
            return Err(Error::Shape(format!(
                "system {}×{} with rhs of length {}",
                matrix.nrows(),
                matrix.ncols(),
                rhs.len()
            )));
        }
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::Shape(format!(
                "system order {n} is not a power of two ≥ 2"
            )));
        }
        if !linalg::is_hermitian(&matrix, sim::NORM_TOLERANCE) {
            return Err(Error::Validation("matrix is not Hermitian".into()));
        }
        if linalg::norm(rhs.as_slice()) == 0.0 {
            return Err(Error::DegenerateInput("right-hand side is zero".into()));
        }
        let eigen = HermitianEigen::new(&matrix);
        let (min, max) = (eigen.min_abs(), eigen.max_abs());
        if max == 0.0 || min <= linalg::PIVOT_TOLERANCE * max {
            return Err(Error::Singular(format!(
                "eigenvalue magnitudes span [{min:e}, {max:e}]"
            )));
        }
        let sparsity = (0..n)
            .map(|r| (0..n).filter(|&c| matrix[(r, c)].norm() > 0.0).count())
            .max()
            .unwrap_or(0);
        Ok(Self {
            matrix,
            rhs,
            condition_number: max / min,
            eigen,
            sparsity,
            embedding,
        })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn rhs(&self) -> &CVector {
        &self.rhs
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn n_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigen.values
    }

    pub fn eigen(&self) -> &HermitianEigen {
        &self.eigen
    }

    /// `max|λ| / min|λ|`.
    pub fn condition_number(&self) -> f64 {
        self.condition_number
    }

    /// Maximum number of nonzeros in any row. Reported only; the solver is dense.
    pub fn sparsity(&self) -> usize {
        self.sparsity
    }

    pub fn embedding(&self) -> Embedding {
        self.embedding
    }

    /// Reads the solution of the original problem out of a solution of this system.
    pub fn extract_solution(&self, x: &[Complex64]) -> Vec<Complex64> {
        match self.embedding {
            Embedding::Direct => x.to_vec(),
            Embedding::Dilated { original_dim } => x[original_dim..2 * original_dim].to_vec(),
        }
    }
}

/// Returns `A` unchanged when Hermitian, otherwise the dilation
/// `[[0, A], [A†, 0]]` with rhs `[b, 0]`.
pub fn make_hermitian(a: &CMatrix, b: &CVector) -> Result<HermitianSystem> {
    if !a.is_square() || b.len() != a.nrows() {
        return Err(Error::Shape(format!(
            "{}×{} matrix with rhs of length {}",
            a.nrows(),
            a.ncols(),
            b.len()
        )));
    }
    // Nonsingularity is checked on the original matrix so the error names it.
    linalg::solve(a, b)?;
    if linalg::is_hermitian(a, sim::NORM_TOLERANCE) {
        return HermitianSystem::new(a.clone(), b.clone());
    }
    let n = a.nrows();
    let zero = Complex64::new(0.0, 0.0);
    let mut big = CMatrix::from_element(2 * n, 2 * n, zero);
    big.view_mut((0, n), (n, n)).copy_from(a);
    big.view_mut((n, 0), (n, n)).copy_from(&a.adjoint());
    let mut rhs = CVector::from_element(2 * n, zero);
    rhs.rows_mut(0, n).copy_from(b);
    HermitianSystem::with_embedding(big, rhs, Embedding::Dilated { original_dim: n })
}

/// Pads a square system to the next power of two with an identity block and
/// zero rhs entries, which leaves the leading solution entries unchanged.
pub fn pad_to_power_of_two(a: &CMatrix, b: &CVector) -> (CMatrix, CVector) {
    let n = a.nrows();
    let target = n.max(2).next_power_of_two();
    let mut big = CMatrix::identity(target, target);
    big.view_mut((0, 0), (n, n)).copy_from(a);
    let mut rhs = CVector::zeros(target);
    rhs.rows_mut(0, n).copy_from(b);
    (big, rhs)
}

/// Oracle solve by pivoted Gaussian elimination.
pub fn classical_solve(system: &HermitianSystem) -> Result<CVector> {
    linalg::solve(&system.matrix, &system.rhs)
}

/// How clock-register values map to eigenvalue estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenvalueEncoding {
    /// `k ↦ k`, for positive spectra.
    Unsigned,
    /// `k ↦ k − 2^m` for `k ≥ 2^{m−1}`, for spectra with negative eigenvalues.
    TwosComplement,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HhlConfig {
    pub clock_qubits: usize,
    /// `t` in `e^{iAt}`.
    pub evolution_time: f64,
    /// `C` in the conditional rotation `arcsin(C/λ̂)`.
    pub rotation_constant: f64,
    pub tolerance: f64,
    pub encoding: EigenvalueEncoding,
}

impl HhlConfig {
    /// Checks the representability constraints against a concrete system.
    pub fn validate(&self, system: &HermitianSystem) -> Result<()> {
        if self.clock_qubits == 0 {
            return Err(Error::Validation(
                "at least one clock qubit is required".into(),
            ));
        }
        if !(self.evolution_time > 0.0 && self.evolution_time.is_finite()) {
            return Err(Error::Validation(format!(
                "evolution time {} must be positive",
                self.evolution_time
            )));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::Validation(format!(
                "tolerance {} must be positive",
                self.tolerance
            )));
        }
        let eig = system.eigen();
        let min_abs = eig.min_abs();
        if !(self.rotation_constant > 0.0 && self.rotation_constant <= min_abs * (1.0 + 1e-12)) {
            return Err(Error::Validation(format!(
                "rotation constant {} must lie in (0, min|λ| = {min_abs}]",
                self.rotation_constant
            )));
        }
        let scaled = eig.max_abs() * self.evolution_time / (2.0 * PI);
        match self.encoding {
            EigenvalueEncoding::Unsigned => {
                if eig.values[0] < 0.0 {
                    return Err(Error::Validation(
                        "negative eigenvalues need two's-complement clock encoding".into(),
                    ));
                }
                if scaled >= 1.0 {
                    return Err(Error::Validation(format!(
                        "λ_max·t/2π = {scaled} wraps around the clock register"
                    )));
                }
            }
            EigenvalueEncoding::TwosComplement => {
                if scaled >= 0.5 {
                    return Err(Error::Validation(format!(
                        "max|λ|·t/2π = {scaled} wraps around a signed clock register"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Eigenvalue estimate attached to clock value `k`.
    pub fn eigenvalue_estimate(&self, k: usize) -> f64 {
        let levels = 1usize << self.clock_qubits;
        let signed = match self.encoding {
            EigenvalueEncoding::TwosComplement if k >= levels / 2 => k as f64 - levels as f64,
            _ => k as f64,
        };
        2.0 * PI * signed / (self.evolution_time * levels as f64)
    }
}

/// Smallest clock register meeting `m ≥ ⌈log2(κ/ε)⌉`, capped at
/// [`MAX_AUTO_CLOCK_QUBITS`].
pub fn clock_qubits_for_tolerance(condition_number: f64, tolerance: f64) -> usize {
    let m = (condition_number / tolerance).log2().ceil();
    (m.max(1.0) as usize).min(MAX_AUTO_CLOCK_QUBITS)
}

/// Picks `t` and `C` for a system and clock size.
///
/// `t` is the largest value within the no-wraparound bound
/// `max|λ|·t/2π ≤ (2^m − 1)/2^m` (or `(2^{m−1} − 1)/2^m` for indefinite
/// spectra) that puts every eigenvalue exactly on the clock grid; if no such
/// value exists the bound itself is used. `C = 0.99·min|λ|`.
pub fn choose_config(system: &HermitianSystem, clock_qubits: usize) -> HhlConfig {
    let clock_qubits = clock_qubits.max(1);
    let eig = system.eigen();
    let encoding = if eig.values[0] < 0.0 {
        EigenvalueEncoding::TwosComplement
    } else {
        EigenvalueEncoding::Unsigned
    };
    let levels = (1u64 << clock_qubits) as f64;
    let max_index: u64 = match encoding {
        EigenvalueEncoding::Unsigned => (1u64 << clock_qubits) - 1,
        EigenvalueEncoding::TwosComplement => (1u64 << (clock_qubits - 1)) - 1,
    };
    let max_abs = eig.max_abs();
    let grid_index = (1..=max_index).rev().find(|&k| {
        let scale = k as f64 / max_abs;
        eig.values.iter().all(|&l| {
            let pos = l.abs() * scale;
            pos.round() >= 1.0 && (pos - pos.round()).abs() <= 1e-9 * k as f64
        })
    });
    let index = match grid_index {
        Some(k) => k as f64,
        // only reachable for a signed one-qubit clock; stay strictly inside the bound
        None if max_index == 0 => levels / 4.0,
        None => max_index as f64,
    };
    HhlConfig {
        clock_qubits,
        evolution_time: 2.0 * PI * index / (levels * max_abs),
        rotation_constant: ROTATION_SAFETY * eig.min_abs(),
        tolerance: DEFAULT_TOLERANCE,
        encoding,
    }
}

#[derive(Debug, Clone)]
pub struct HhlSolution {
    /// Post-selected system register, proportional to `A⁻¹b`.
    pub state: QuantumState,
    /// Probability of measuring the rotation ancilla in `|1⟩`.
    pub success_probability: f64,
    /// `|⟨x|x_classical⟩|²` against [`classical_solve`].
    pub fidelity_vs_classical: Option<f64>,
}

impl HhlSolution {
    /// Solution vector with its scale restored by the least-squares fit
    /// `s = argmin ‖A(s·x̂) − b‖`, before extracting any embedded block.
    pub fn rescaled(&self, system: &HermitianSystem) -> CVector {
        let xhat = CVector::from_column_slice(self.state.amplitudes());
        let ax = system.matrix() * &xhat;
        let denom = ax.norm_squared();
        let s: Complex64 = ax
            .iter()
            .zip(system.rhs().iter())
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            / denom;
        xhat * s
    }
}

fn controlled_powers(
    system: &HermitianSystem,
    config: &HhlConfig,
    system_qubits: &[usize],
    clock: &[usize],
) -> Vec<GateOp> {
    clock
        .iter()
        .enumerate()
        .map(|(j, &q)| {
            let time = config.evolution_time * (1u64 << j) as f64;
            let u = system
                .eigen()
                .apply_function(|l| Complex64::from_polar(1.0, l * time));
            GateOp::unitary(u, system_qubits).controlled_by(&[q])
        })
        .collect()
}

/// Runs the HHL circuit and post-selects the solution state.
pub fn hhl_solve(system: &HermitianSystem, config: &HhlConfig) -> Result<HhlSolution> {
    config.validate(system)?;
    let n = system.n_qubits();
    let m = config.clock_qubits;
    let total = n + m + 1;
    if total > sim::MAX_QUBITS {
        return Err(Error::Resource(format!(
            "HHL needs {total} qubits, dense simulator is capped at {}",
            sim::MAX_QUBITS
        )));
    }
    let system_qubits: Vec<usize> = (0..n).collect();
    let clock: Vec<usize> = (n..n + m).collect();
    let ancilla = n + m;

    let (b_state, _) = amplitude_encode(system.rhs().as_slice())?;
    let mut state = b_state.tensor(&QuantumState::zero(m + 1)?)?;

    // phase estimation
    let powers = controlled_powers(system, config, &system_qubits, &clock);
    for &q in &clock {
        state.apply_in_place(&GateOp::h(q))?;
    }
    for g in &powers {
        state.apply_in_place(g)?;
    }
    for g in qft::inverse_qft(&clock) {
        state.apply_in_place(&g)?;
    }

    // eigenvalue inversion, one RY angle per clock value; value 0 is left alone
    let angles = (0..1usize << m)
        .map(|k| {
            if k == 0 {
                return 0.0;
            }
            let ratio = (config.rotation_constant / config.eigenvalue_estimate(k)).clamp(-1.0, 1.0);
            2.0 * ratio.asin()
        })
        .collect();
    state.apply_in_place(&GateOp::multiplexed_ry(ancilla, &clock, angles))?;

    // uncompute
    for g in qft::qft(&clock) {
        state.apply_in_place(&g)?;
    }
    for g in powers.iter().rev() {
        state.apply_in_place(&g.adjoint())?;
    }
    for &q in &clock {
        state.apply_in_place(&GateOp::h(q))?;
    }

    let success_probability = state.measure_probabilities(&[ancilla])?.get(1).min(1.0);
    let mut selectors = clock.clone();
    selectors.push(ancilla);
    let (projected, kept) = state.project(&selectors, 1 << m)?;
    if kept < 1e-12 {
        return Err(Error::PostSelection(kept));
    }
    let stride_mask = (1usize << n) - 1;
    let solution: Vec<Complex64> = projected
        .iter()
        .enumerate()
        .filter(|(i, _)| i & !stride_mask == 1 << ancilla)
        .map(|(_, a)| *a)
        .collect();
    let state = QuantumState::normalized(solution)?;
    let fidelity_vs_classical = classical_solve(system)
        .ok()
        .and_then(|x| fidelity(&state, x.as_slice()).ok());
    Ok(HhlSolution {
        state,
        success_probability,
        fidelity_vs_classical,
    })
}

/// `|⟨a | b/‖b‖⟩|²`.
pub fn fidelity(a: &QuantumState, b: &[Complex64]) -> Result<f64> {
    if a.dim() != b.len() {
        return Err(Error::Shape(format!(
            "state of dimension {} vs vector of length {}",
            a.dim(),
            b.len()
        )));
    }
    let norm = linalg::norm(b);
    if norm == 0.0 {
        return Err(Error::DegenerateInput(
            "fidelity against a zero vector".into(),
        ));
    }
    let overlap: Complex64 = a
        .amplitudes()
        .iter()
        .zip(b)
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok((overlap.norm_sqr() / (norm * norm)).min(1.0))
}

/// Random Hermitian matrix with eigenvalues drawn uniformly from `[lo, hi]`.
/// Eigenvectors come from diagonalizing a random Hermitian matrix.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, lo: f64, hi: f64, rng: &mut R) -> CMatrix {
    let mut h = CMatrix::zeros(dim, dim);
    for r in 0..dim {
        h[(r, r)] = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
        for c in r + 1..dim {
            let v = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            h[(r, c)] = v;
            h[(c, r)] = v.conj();
        }
    }
    let basis = HermitianEigen::new(&h).vectors;
    let spectrum: Vec<f64> = (0..dim).map(|_| rng.random_range(lo..=hi)).collect();
    let d = CMatrix::from_fn(dim, dim, |r, c| {
        if r == c {
            Complex64::new(spectrum[r], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let a = &basis * d * basis.adjoint();
    // symmetrize away rounding so the Hermitian check is exact
    (&a + a.adjoint()).map(|v| v * 0.5)
}

/// Random unit vector with complex entries.
pub fn random_rhs<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVector {
    loop {
        let v = CVector::from_fn(dim, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let n = v.norm();
        if n > 1e-3 {
            return v / Complex64::new(n, 0.0);
        }
    }
}
