use rand::Rng;

use super::{GateOp, QuantumState};
use crate::{Error, Result};

/// Runs the swap-test circuit on `|a⟩|b⟩|0⟩` and returns the final state.
///
/// Layout: `a` on qubits `0..n`, `b` on `n..2n`, ancilla on qubit `2n`.
pub fn swap_test_circuit(a: &QuantumState, b: &QuantumState) -> Result<QuantumState> {
    if a.n_qubits() != b.n_qubits() {
        return Err(Error::Shape(format!(
            "swap test needs equal registers, got {} and {} qubits",
            a.n_qubits(),
            b.n_qubits()
        )));
    }
    let n = a.n_qubits();
    let ancilla = 2 * n;
    let mut state = a.tensor(b)?.tensor(&QuantumState::zero(1)?)?;
    state.apply_in_place(&GateOp::h(ancilla))?;
    for q in 0..n {
        state.apply_in_place(&GateOp::swap(q, n + q).controlled_by(&[ancilla]))?;
    }
    state.apply_in_place(&GateOp::h(ancilla))?;
    Ok(state)
}

/// Exact ancilla-0 probability of the swap test, `1/2 + |⟨a|b⟩|²/2`.
pub fn swap_test(a: &QuantumState, b: &QuantumState) -> Result<f64> {
    let state = swap_test_circuit(a, b)?;
    let p0 = state.measure_probabilities(&[2 * a.n_qubits()])?.get(0);
    Ok(p0.clamp(0.5, 1.0))
}

/// Shot-sampled estimate of the ancilla-0 probability.
pub fn swap_test_sampled<R: Rng + ?Sized>(
    a: &QuantumState,
    b: &QuantumState,
    shots: usize,
    rng: &mut R,
) -> Result<f64> {
    if shots == 0 {
        return Err(Error::Domain(
            "sampled swap test needs at least one shot".into(),
        ));
    }
    let state = swap_test_circuit(a, b)?;
    let counts = state.sample_counts(&[2 * a.n_qubits()], shots, rng)?;
    Ok(counts[0] as f64 / shots as f64)
}
