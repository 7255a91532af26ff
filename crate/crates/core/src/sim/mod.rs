//! Exact dense statevector simulator.
//!
//! States are values: every public operation returns a new [`QuantumState`] and
//! leaves its input untouched. Qubit `q` is bit `q` of the amplitude index
//! (little-endian), so `|10⟩` written as a ket with qubit 1 on the left is
//! amplitude index `0b10 = 2`.

mod gate;
mod observable;
pub mod qft;
mod state;
mod swap;

pub use gate::{GateKind, GateOp};
pub use observable::Observable;
pub use state::{
    amplitude_encode, amplitude_encode_padded, amplitude_encode_real, prepare_basis,
    MarginalDistribution, QuantumState,
};
pub use swap::{swap_test, swap_test_circuit, swap_test_sampled};

/// Hard cap on register size for the dense simulator.
pub const MAX_QUBITS: usize = 20;

/// Tolerance used for normalization, unitarity and hermiticity checks.
pub const NORM_TOLERANCE: f64 = 1e-9;

pub(crate) fn check_qubit_count(n: usize) -> crate::Result<()> {
    if n == 0 {
        return Err(crate::Error::Domain(
            "a register needs at least one qubit".into(),
        ));
    }
    if n > MAX_QUBITS {
        return Err(crate::Error::Resource(format!(
            "{n} qubits requested, dense simulator is capped at {MAX_QUBITS}"
        )));
    }
    Ok(())
}
