//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each exported function returns a flat `Float64Array`; the layouts are
//! documented per function. The plain functions in [`curves`] do the work
//! and are what the native tests exercise.

use wasm_bindgen::prelude::*;

pub mod curves;

fn js(e: String) -> JsError {
    JsError::new(&e)
}

/// Rows of `[x, true, classical, quantum]` in `[0, 1]` units.
#[wasm_bindgen]
pub fn qspline_curve(
    function: &str,
    intervals: u32,
    clock_qubits: u32,
    probes: u32,
) -> Result<Vec<f64>, JsError> {
    curves::qspline_curve(
        function,
        intervals as usize,
        clock_qubits as usize,
        probes as usize,
    )
    .map_err(js)
}

/// Rows of `[m, median fidelity, min fidelity]` for `m` in `m_min..=m_max`.
#[wasm_bindgen]
pub fn hhl_sweep(
    size: u32,
    m_min: u32,
    m_max: u32,
    trials: u32,
    seed: u32,
) -> Result<Vec<f64>, JsError> {
    curves::hhl_sweep(
        size as usize,
        m_min as usize,
        m_max as usize,
        trials as usize,
        seed as u64,
    )
    .map_err(js)
}

/// Rows of `[n, Var ∂C/∂θ₁]` for `n` in `2..=n_max`.
#[wasm_bindgen]
pub fn barren_variance(
    n_max: u32,
    layers: u32,
    samples: u32,
    seed: u32,
) -> Result<Vec<f64>, JsError> {
    curves::barren_variance(
        n_max as usize,
        layers as usize,
        samples as usize,
        seed as u64,
    )
    .map_err(js)
}

#[wasm_bindgen]
pub fn spline_functions() -> Vec<String> {
    qlearn_core::qsplines::TargetFunction::ALL
        .iter()
        .map(|t| t.name().to_string())
        .collect()
}
