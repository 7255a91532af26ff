//! Piecewise-linear quantum splines.
//!
//! Each knot interval `[ξ_k, ξ_{k+1}]` gets its own 2×2 system
//! `S_k β_k = ỹ_k` with `S_k = [[1, ξ_k], [1, ξ_{k+1}]]`. The systems are
//! solved independently with HHL (after Hermitian dilation), and a point `x`
//! is evaluated by a swap test between `|β_k⟩` and `|[1, x]⟩`:
//! `p₀ = 1/2 + |⟨β_k|x⟩|²/2`, so `|f(x)| = √(2p₀ − 1)·‖β_k‖·‖[1, x]‖`.
//!
//! The swap test only sees magnitudes, so targets are mapped into `[0, 1]`
//! by an affine [`CodomainScale`] first. The norms lost by amplitude encoding
//! are carried classically.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::hhl::{self, HermitianSystem};
use crate::linalg::{self, to_complex, to_complex_vec};
use crate::sim::{amplitude_encode_real, swap_test, QuantumState};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct KnotGrid {
    knots: Vec<f64>,
}

impl KnotGrid {
    pub fn new(knots: Vec<f64>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::Domain("a knot grid needs at least two knots".into()));
        }
        if knots.iter().any(|k| !k.is_finite()) {
            return Err(Error::Domain("knots must be finite".into()));
        }
        if knots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("knots must be strictly increasing".into()));
        }
        Ok(Self { knots })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn n_intervals(&self) -> usize {
        self.knots.len() - 1
    }

    pub fn interval(&self, k: usize) -> (f64, f64) {
        (self.knots[k], self.knots[k + 1])
    }

    pub fn intervals(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.knots.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn range(&self) -> (f64, f64) {
        (self.knots[0], self.knots[self.knots.len() - 1])
    }

    /// Interval containing `x`: left-closed, right-open, except that the last
    /// knot belongs to the last interval.
    pub fn locate(&self, x: f64) -> Result<usize> {
        let (lo, hi) = self.range();
        if !(lo..=hi).contains(&x) {
            return Err(Error::Extrapolation { x, lo, hi });
        }
        let k = self.knots.partition_point(|&knot| knot <= x);
        Ok((k - 1).min(self.n_intervals() - 1))
    }
}

/// `K + 1` equally spaced knots on `[lo, hi]`.
pub fn build_grid(lo: f64, hi: f64, intervals: usize) -> Result<KnotGrid> {
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::Domain(format!(
            "grid bounds [{lo}, {hi}] are not increasing"
        )));
    }
    if intervals < 1 {
        return Err(Error::Domain("a grid needs at least one interval".into()));
    }
    let step = (hi - lo) / intervals as f64;
    let mut knots: Vec<f64> = (0..intervals).map(|i| lo + step * i as f64).collect();
    knots.push(hi);
    KnotGrid::new(knots)
}

/// Affine map `y ↦ (y − offset)/scale` from target units into `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodomainScale {
    pub offset: f64,
    pub scale: f64,
}

impl CodomainScale {
    pub const IDENTITY: Self = Self {
        offset: 0.0,
        scale: 1.0,
    };

    pub fn forward(&self, y: f64) -> f64 {
        (y - self.offset) / self.scale
    }

    pub fn inverse(&self, u: f64) -> f64 {
        self.offset + self.scale * u
    }
}

/// Registry of shipped targets. Each is evaluated in its own units by
/// [`TargetFunction::raw`] and carries the map that brings it into `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetFunction {
    Sigmoid,
    Tanh01,
    Relu01,
    Sin01,
}

impl TargetFunction {
    pub const ALL: [TargetFunction; 4] = [Self::Sigmoid, Self::Tanh01, Self::Relu01, Self::Sin01];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Sigmoid => "sigmoid",
            Self::Tanh01 => "tanh01",
            Self::Relu01 => "relu01",
            Self::Sin01 => "sin01",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name() == name)
    }

    pub fn raw(&self, x: f64) -> f64 {
        match self {
            Self::Sigmoid => 1.0 / (1.0 + (-x).exp()),
            Self::Tanh01 => x.tanh(),
            Self::Relu01 => x.max(0.0),
            Self::Sin01 => x.sin(),
        }
    }

    /// Map into `[0, 1]` over `[lo, hi]`. ReLU is divided by its maximum on the range.
    pub fn codomain(&self, _lo: f64, hi: f64) -> CodomainScale {
        match self {
            Self::Sigmoid => CodomainScale::IDENTITY,
            Self::Tanh01 | Self::Sin01 => CodomainScale {
                offset: -1.0,
                scale: 2.0,
            },
            Self::Relu01 => CodomainScale {
                offset: 0.0,
                scale: if hi > 0.0 { hi } else { 1.0 },
            },
        }
    }
}

/// `S_k = [[1, ξ_k], [1, ξ_{k+1}]]` and the scaled targets at both endpoints.
pub fn assemble_block<F: Fn(f64) -> f64>(
    f: F,
    codomain: CodomainScale,
    interval: (f64, f64),
) -> Result<(DMatrix<f64>, [f64; 2])> {
    let (a, b) = interval;
    if a == b {
        return Err(Error::Domain(format!("degenerate interval [{a}, {b}]")));
    }
    let eval = |x: f64| {
        let y = f(x);
        if y.is_finite() {
            Ok(codomain.forward(y))
        } else {
            Err(Error::Evaluation(format!("target is undefined at x = {x}")))
        }
    };
    let design = DMatrix::from_row_slice(2, 2, &[1.0, a, 1.0, b]);
    Ok((design, [eval(a)?, eval(b)?]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplineBlock {
    pub interval: (f64, f64),
    pub design: DMatrix<f64>,
    pub targets: [f64; 2],
    /// `|β_k⟩` from HHL; `None` when the targets are both zero.
    pub beta_state: Option<QuantumState>,
    /// `‖β_k‖`, restored at evaluation time.
    pub beta_norm: f64,
    /// Elimination solution `[intercept, slope]`.
    pub beta_classical: [f64; 2],
    pub fidelity: Option<f64>,
}

impl SplineBlock {
    pub fn is_degenerate(&self) -> bool {
        self.beta_state.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplineFitOptions {
    /// Clock register size handed to [`hhl::choose_config`] for every block.
    pub clock_qubits: usize,
}

impl Default for SplineFitOptions {
    fn default() -> Self {
        Self {
            clock_qubits: DEFAULT_SPLINE_CLOCK_QUBITS,
        }
    }
}

/// Interval designs far from the origin are ill-conditioned (κ ≈ 180 for unit
/// intervals at |ξ| = 10), and the swap-test readout multiplies direction
/// errors in `|β_k⟩` by `‖β_k‖·‖[1, x]‖`; 14 clock qubits keep the end-to-end
/// error below 1e-2 on `[-10, 10]`.
pub const DEFAULT_SPLINE_CLOCK_QUBITS: usize = 14;

#[derive(Debug, Clone, PartialEq)]
pub struct QSplineModel {
    pub grid: KnotGrid,
    pub blocks: Vec<SplineBlock>,
    pub target_name: String,
    pub codomain_scale: CodomainScale,
}

fn solve_block(design: &DMatrix<f64>, targets: &[f64; 2]) -> Result<[f64; 2]> {
    let beta = linalg::solve(design, &DVector::from_column_slice(targets))?;
    Ok([beta[0], beta[1]])
}

/// Fits every block with HHL and keeps the elimination solution alongside.
pub fn fit<F: Fn(f64) -> f64>(
    target_name: &str,
    f: F,
    codomain: CodomainScale,
    grid: &KnotGrid,
    options: SplineFitOptions,
) -> Result<QSplineModel> {
    let blocks = grid
        .intervals()
        .map(|interval| {
            let (design, targets) = assemble_block(&f, codomain, interval)?;
            let beta_classical = solve_block(&design, &targets)?;
            let beta_norm = beta_classical[0].hypot(beta_classical[1]);
            if targets == [0.0, 0.0] {
                return Ok(SplineBlock {
                    interval,
                    design,
                    targets,
                    beta_state: None,
                    beta_norm: 0.0,
                    beta_classical,
                    fidelity: None,
                });
            }
            let system = hhl::make_hermitian(&to_complex(&design), &to_complex_vec(&targets))?;
            let beta_state = hhl_block_state(&system, options.clock_qubits)?;
            let fidelity = hhl::fidelity(&beta_state, to_complex_vec(&beta_classical).as_slice())?;
            Ok(SplineBlock {
                interval,
                design,
                targets,
                beta_state: Some(beta_state),
                beta_norm,
                beta_classical,
                fidelity: Some(fidelity),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QSplineModel {
        grid: grid.clone(),
        blocks,
        target_name: target_name.to_string(),
        codomain_scale: codomain,
    })
}

/// Fits one of the shipped targets over the grid's range.
pub fn fit_target(
    target: TargetFunction,
    grid: &KnotGrid,
    options: SplineFitOptions,
) -> Result<QSplineModel> {
    let (lo, hi) = grid.range();
    fit(
        target.name(),
        |x| target.raw(x),
        target.codomain(lo, hi),
        grid,
        options,
    )
}

fn hhl_block_state(system: &HermitianSystem, clock_qubits: usize) -> Result<QuantumState> {
    let config = hhl::choose_config(system, clock_qubits);
    let solution = hhl::hhl_solve(system, &config)?;
    let lower = system.extract_solution(solution.state.amplitudes());
    QuantumState::normalized(lower)
}

/// Intermediate quantities of one evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplineEvaluation {
    pub interval: usize,
    /// Swap-test ancilla probability.
    pub p0: f64,
    /// `√(2p₀ − 1)`, always in `[0, 1]`.
    pub overlap: f64,
    /// Estimate in `[0, 1]` units after restoring both norms.
    pub scaled: f64,
    /// Estimate in target units.
    pub value: f64,
}

pub fn evaluate_detailed(model: &QSplineModel, x: f64) -> Result<SplineEvaluation> {
    let k = model.grid.locate(x)?;
    let block = &model.blocks[k];
    let Some(beta) = &block.beta_state else {
        return Ok(SplineEvaluation {
            interval: k,
            p0: 1.0,
            overlap: 0.0,
            scaled: 0.0,
            value: model.codomain_scale.inverse(0.0),
        });
    };
    let (x_state, x_norm) = amplitude_encode_real(&[1.0, x])?;
    let p0 = swap_test(beta, &x_state)?;
    let overlap = (2.0 * p0 - 1.0).max(0.0).sqrt();
    let scaled = overlap * block.beta_norm * x_norm;
    Ok(SplineEvaluation {
        interval: k,
        p0,
        overlap,
        scaled,
        value: model.codomain_scale.inverse(scaled),
    })
}

/// Quantum estimate of the target at `x`, in target units.
pub fn evaluate(model: &QSplineModel, x: f64) -> Result<f64> {
    Ok(evaluate_detailed(model, x)?.value)
}

/// Per-block `[intercept, slope]` by exact elimination (scaled units).
pub fn classical_spline_fit<F: Fn(f64) -> f64>(
    f: F,
    codomain: CodomainScale,
    grid: &KnotGrid,
) -> Result<Vec<[f64; 2]>> {
    grid.intervals()
        .map(|interval| {
            let (design, targets) = assemble_block(&f, codomain, interval)?;
            solve_block(&design, &targets)
        })
        .collect()
}

/// Piecewise-linear prediction from classical coefficients, in scaled units.
pub fn classical_predict(coefficients: &[[f64; 2]], grid: &KnotGrid, x: f64) -> Result<f64> {
    let k = grid.locate(x)?;
    let [b0, b1] = coefficients[k];
    Ok(b0 + b1 * x)
}

/// The block-diagonal design `S` and stacked targets `ỹ` of the whole grid.
pub fn block_diagonal_system<F: Fn(f64) -> f64>(
    f: F,
    codomain: CodomainScale,
    grid: &KnotGrid,
) -> Result<(DMatrix<f64>, DVector<f64>)> {
    let k = grid.n_intervals();
    let mut s = DMatrix::zeros(2 * k, 2 * k);
    let mut y = DVector::zeros(2 * k);
    for (i, interval) in grid.intervals().enumerate() {
        let (design, targets) = assemble_block(&f, codomain, interval)?;
        s.view_mut((2 * i, 2 * i), (2, 2)).copy_from(&design);
        y[2 * i] = targets[0];
        y[2 * i + 1] = targets[1];
    }
    Ok((s, y))
}

/// `⟨β_k|x⟩` computed directly, the quantity the swap test estimates.
pub fn direct_overlap(block: &SplineBlock, x: f64) -> Result<f64> {
    let Some(beta) = &block.beta_state else {
        return Ok(0.0);
    };
    let (x_state, _) = amplitude_encode_real(&[1.0, x])?;
    Ok(beta
        .amplitudes()
        .iter()
        .zip(x_state.amplitudes())
        .map(|(a, b)| a.conj() * b)
        .sum::<Complex64>()
        .norm())
}

#[cfg(test)]
mod tests;
