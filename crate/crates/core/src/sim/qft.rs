//! Quantum Fourier transform over a register given as a little-endian qubit list.

use std::f64::consts::PI;

use super::GateOp;

/// Gates for `|k⟩ ↦ 2^{-m/2} Σ_y e^{2πi k y / 2^m} |y⟩`, where `k` and `y`
/// are read little-endian from `qubits`.
pub fn qft(qubits: &[usize]) -> Vec<GateOp> {
    let m = qubits.len();
    let mut gates = Vec::with_capacity(m * (m + 1) / 2 + m / 2);
    for j in (0..m).rev() {
        gates.push(GateOp::h(qubits[j]));
        for i in (0..j).rev() {
            gates.push(GateOp::controlled_phase(
                qubits[i],
                qubits[j],
                PI / (1u64 << (j - i)) as f64,
            ));
        }
    }
    for j in 0..m / 2 {
        gates.push(GateOp::swap(qubits[j], qubits[m - 1 - j]));
    }
    gates
}

pub fn inverse_qft(qubits: &[usize]) -> Vec<GateOp> {
    qft(qubits).iter().rev().map(GateOp::adjoint).collect()
}
