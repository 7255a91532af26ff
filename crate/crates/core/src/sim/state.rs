use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use super::{check_qubit_count, GateKind, GateOp, Observable, NORM_TOLERANCE};
use crate::{Error, Result};

/// Normalized pure state of `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

/// Computational basis state `|index⟩`.
pub fn prepare_basis(n_qubits: usize, index: usize) -> Result<QuantumState> {
    check_qubit_count(n_qubits)?;
    let dim = 1usize << n_qubits;
    if index >= dim {
        return Err(Error::Domain(format!(
            "basis index {index} out of range for {n_qubits} qubit(s)"
        )));
    }
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
    amplitudes[index] = Complex64::new(1.0, 0.0);
    Ok(QuantumState {
        n_qubits,
        amplitudes,
    })
}

/// Loads `v / ‖v‖` into a register and returns the state together with `‖v‖`.
///
/// A length-1 vector yields a one-qubit state `|0⟩` scaled by the phase of `v[0]`.
pub fn amplitude_encode(v: &[Complex64]) -> Result<(QuantumState, f64)> {
    if v.is_empty() || !v.len().is_power_of_two() {
        return Err(Error::Shape(format!(
            "amplitude encoding needs a power-of-two length, got {}",
            v.len()
        )));
    }
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if !norm.is_finite() || norm == 0.0 {
        return Err(Error::DegenerateInput("cannot encode a zero vector".into()));
    }
    let mut amplitudes: Vec<Complex64> = v.iter().map(|a| a / norm).collect();
    let mut n_qubits = v.len().trailing_zeros() as usize;
    if n_qubits == 0 {
        n_qubits = 1;
        amplitudes.push(Complex64::new(0.0, 0.0));
    }
    check_qubit_count(n_qubits)?;
    Ok((
        QuantumState {
            n_qubits,
            amplitudes,
        },
        norm,
    ))
}

/// Zero-pads `v` to the next power of two before encoding.
pub fn amplitude_encode_padded(v: &[Complex64]) -> Result<(QuantumState, f64)> {
    let mut padded = v.to_vec();
    padded.resize(v.len().max(2).next_power_of_two(), Complex64::new(0.0, 0.0));
    amplitude_encode(&padded)
}

pub fn amplitude_encode_real(v: &[f64]) -> Result<(QuantumState, f64)> {
    let c: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    amplitude_encode(&c)
}

impl QuantumState {
    /// `|0…0⟩` on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        prepare_basis(n_qubits, 0)
    }

    /// Wraps an amplitude vector that must already be normalized.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 || !amplitudes.len().is_power_of_two() {
            return Err(Error::Shape(format!(
                "state vector length must be 2^n with n ≥ 1, got {}",
                amplitudes.len()
            )));
        }
        let n_qubits = amplitudes.len().trailing_zeros() as usize;
        check_qubit_count(n_qubits)?;
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Validation(format!(
                "amplitudes have squared norm {norm_sqr}, expected 1"
            )));
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Normalizes an arbitrary nonzero vector of power-of-two length.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let (state, _) = amplitude_encode(&amplitudes)?;
        if state.amplitudes.len() != amplitudes.len() {
            return Err(Error::Shape(
                "state vector needs at least two amplitudes".into(),
            ));
        }
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &QuantumState) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::Shape(format!(
                "cannot take overlap of {}-qubit and {}-qubit states",
                self.n_qubits, other.n_qubits
            )));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Tensor product with `self` on the low qubits and `high` above it.
    pub fn tensor(&self, high: &QuantumState) -> Result<QuantumState> {
        let n_qubits = self.n_qubits + high.n_qubits;
        check_qubit_count(n_qubits)?;
        let mut amplitudes = Vec::with_capacity(1 << n_qubits);
        for h in &high.amplitudes {
            for l in &self.amplitudes {
                amplitudes.push(h * l);
            }
        }
        Ok(QuantumState {
            n_qubits,
            amplitudes,
        })
    }

    pub fn apply(&self, gate: &GateOp) -> Result<QuantumState> {
        let mut out = self.clone();
        out.apply_in_place(gate)?;
        Ok(out)
    }

    pub fn apply_all<'a, I>(&self, gates: I) -> Result<QuantumState>
    where
        I: IntoIterator<Item = &'a GateOp>,
    {
        let mut out = self.clone();
        for g in gates {
            out.apply_in_place(g)?;
        }
        Ok(out)
    }

    /// Mutating variant used inside circuit builders that own their state.
    pub fn apply_in_place(&mut self, gate: &GateOp) -> Result<()> {
        gate.validate(self.n_qubits)?;
        if let GateKind::MultiplexedRy(angles) = gate.kind() {
            apply_multiplexed_ry(
                &mut self.amplitudes,
                angles,
                gate.targets()[0],
                gate.controls(),
            );
            return Ok(());
        }
        let matrix = gate.matrix();
        apply_matrix(
            &mut self.amplitudes,
            &matrix,
            gate.targets(),
            gate.control_mask(),
            gate.control_value(),
        );
        Ok(())
    }

    /// `⟨ψ|O|ψ⟩` for an observable acting on a subset of qubits.
    pub fn expectation(&self, obs: &Observable) -> Result<f64> {
        obs.check_register(self.n_qubits)?;
        let mut applied = self.amplitudes.clone();
        apply_matrix(&mut applied, obs.matrix(), obs.qubits(), 0, 0);
        let value: Complex64 = self
            .amplitudes
            .iter()
            .zip(&applied)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(value.re)
    }

    /// Marginal distribution over `qubits`; outcome bit `i` is the value of `qubits[i]`.
    pub fn measure_probabilities(&self, qubits: &[usize]) -> Result<MarginalDistribution> {
        if qubits.is_empty() {
            return Err(Error::Domain("measurement needs at least one qubit".into()));
        }
        check_distinct(qubits, self.n_qubits)?;
        let mut probs = vec![0.0; 1 << qubits.len()];
        for (index, amp) in self.amplitudes.iter().enumerate() {
            let outcome = qubits
                .iter()
                .enumerate()
                .fold(0usize, |acc, (bit, &q)| acc | (((index >> q) & 1) << bit));
            probs[outcome] += amp.norm_sqr();
        }
        Ok(MarginalDistribution {
            qubits: qubits.to_vec(),
            probs,
        })
    }

    /// Projects `qubits` onto `outcome` (bit `i` ↔ `qubits[i]`) without renormalizing.
    /// Returns the unnormalized amplitudes and the outcome probability.
    pub fn project(&self, qubits: &[usize], outcome: usize) -> Result<(Vec<Complex64>, f64)> {
        check_distinct(qubits, self.n_qubits)?;
        let mut mask = 0usize;
        let mut value = 0usize;
        for (bit, &q) in qubits.iter().enumerate() {
            mask |= 1 << q;
            value |= ((outcome >> bit) & 1) << q;
        }
        let mut prob = 0.0;
        let projected = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| {
                if i & mask == value {
                    prob += a.norm_sqr();
                    *a
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Ok((projected, prob))
    }

    /// Draws `shots` outcomes over `qubits` from the exact marginal.
    pub fn sample_counts<R: Rng + ?Sized>(
        &self,
        qubits: &[usize],
        shots: usize,
        rng: &mut R,
    ) -> Result<Vec<u64>> {
        let marginal = self.measure_probabilities(qubits)?;
        marginal.sample(shots, rng)
    }
}

/// Outcome probabilities over an ordered list of measured qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalDistribution {
    pub qubits: Vec<usize>,
    pub probs: Vec<f64>,
}

impl MarginalDistribution {
    pub fn get(&self, outcome: usize) -> f64 {
        self.probs.get(outcome).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn sample<R: Rng + ?Sized>(&self, shots: usize, rng: &mut R) -> Result<Vec<u64>> {
        let mut counts = vec![0u64; self.probs.len()];
        if shots == 0 {
            return Ok(counts);
        }
        let dist = WeightedIndex::new(&self.probs)
            .map_err(|e| Error::Validation(format!("invalid distribution: {e}")))?;
        for _ in 0..shots {
            counts[dist.sample(rng)] += 1;
        }
        Ok(counts)
    }
}

fn check_distinct(qubits: &[usize], n_qubits: usize) -> Result<()> {
    for (i, &q) in qubits.iter().enumerate() {
        if q >= n_qubits {
            return Err(Error::Domain(format!(
                "qubit {q} out of range for {n_qubits}-qubit register"
            )));
        }
        if qubits[..i].contains(&q) {
            return Err(Error::Domain(format!("qubit {q} listed twice")));
        }
    }
    Ok(())
}

/// Applies a `2^k × 2^k` row-major matrix to the sub-register `targets`
/// (target `b` is bit `b` of the local index) on every basis block whose
/// control bits match `ctrl_value` under `ctrl_mask`.
pub(crate) fn apply_matrix(
    amps: &mut [Complex64],
    matrix: &nalgebra::DMatrix<Complex64>,
    targets: &[usize],
    ctrl_mask: usize,
    ctrl_value: usize,
) {
    let k = targets.len();
    let local_dim = 1usize << k;
    let target_mask: usize = targets.iter().map(|&t| 1usize << t).sum();
    let offsets: Vec<usize> = (0..local_dim)
        .map(|j| {
            targets
                .iter()
                .enumerate()
                .fold(0usize, |acc, (b, &t)| acc | (((j >> b) & 1) << t))
        })
        .collect();

    if k == 1 {
        let (m00, m01, m10, m11) = (
            matrix[(0, 0)],
            matrix[(0, 1)],
            matrix[(1, 0)],
            matrix[(1, 1)],
        );
        let step = offsets[1];
        for base in 0..amps.len() {
            if base & target_mask != 0 || base & ctrl_mask != ctrl_value {
                continue;
            }
            let a0 = amps[base];
            let a1 = amps[base | step];
            amps[base] = m00 * a0 + m01 * a1;
            amps[base | step] = m10 * a0 + m11 * a1;
        }
        return;
    }

    let mut local = vec![Complex64::new(0.0, 0.0); local_dim];
    for base in 0..amps.len() {
        if base & target_mask != 0 || base & ctrl_mask != ctrl_value {
            continue;
        }
        for (slot, &off) in local.iter_mut().zip(&offsets) {
            *slot = amps[base | off];
        }
        for (row, &off) in offsets.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (col, v) in local.iter().enumerate() {
                acc += matrix[(row, col)] * v;
            }
            amps[base | off] = acc;
        }
    }
}

fn apply_multiplexed_ry(amps: &mut [Complex64], angles: &[f64], target: usize, select: &[usize]) {
    let step = 1usize << target;
    let rotations: Vec<(f64, f64)> = angles.iter().map(|t| (t / 2.0).sin_cos()).collect();
    for base in 0..amps.len() {
        if base & step != 0 {
            continue;
        }
        let k = select
            .iter()
            .enumerate()
            .fold(0usize, |acc, (bit, &q)| acc | (((base >> q) & 1) << bit));
        let (s, c) = rotations[k];
        let a0 = amps[base];
        let a1 = amps[base | step];
        amps[base] = a0 * c - a1 * s;
        amps[base | step] = a0 * s + a1 * c;
    }
}
