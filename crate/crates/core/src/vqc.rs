//! Variational quantum classifier: feature-map encoding, a layered RY/RZ
//! ansatz with a CNOT ring, ⟨Z₀⟩ readout, parameter-shift gradients, plain
//! gradient descent and a gradient-variance diagnostic.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::dataset::TrainingSet;
use crate::sim::{GateOp, Observable, QuantumState};
use crate::{Error, Result};

/// Step of the central finite-difference gradient.
pub const FINITE_DIFFERENCE_STEP: f64 = 1e-6;

/// Slack allowed when checking raw features against the scaling domain.
const DOMAIN_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EncodingScheme {
    /// Feature `j` rotates qubit `j`; requires as many qubits as features.
    Angle,
    /// Features are cycled over the qubits: step `i` applies the angle of
    /// feature `i mod p` to qubit `i mod n`, for `i < max(n, p)`.
    RepeatedAngle,
}

/// `U_φ(x) = Π RY(a_j)`, with `a_j = π·(x_j − lo_j)/(hi_j − lo_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMap {
    n_qubits: usize,
    scheme: EncodingScheme,
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl FeatureMap {
    pub fn new(n_qubits: usize, scheme: EncodingScheme, ranges: &[(f64, f64)]) -> Result<Self> {
        crate::sim::check_qubit_count(n_qubits)?;
        if ranges.is_empty() {
            return Err(Error::Domain(
                "feature map needs at least one feature".into(),
            ));
        }
        if scheme == EncodingScheme::Angle && ranges.len() != n_qubits {
            return Err(Error::Shape(format!(
                "angle encoding of {} features needs {} qubits, got {n_qubits}",
                ranges.len(),
                ranges.len()
            )));
        }
        if ranges
            .iter()
            .any(|&(lo, hi)| !(lo.is_finite() && hi.is_finite() && lo <= hi))
        {
            return Err(Error::Domain(
                "feature ranges must be finite with lo ≤ hi".into(),
            ));
        }
        Ok(Self {
            n_qubits,
            scheme,
            lo: ranges.iter().map(|r| r.0).collect(),
            hi: ranges.iter().map(|r| r.1).collect(),
        })
    }

    /// Angle encoding whose inputs already are angles in `[0, π]`.
    pub fn unscaled(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, EncodingScheme::Angle, &vec![(0.0, PI); n_qubits])
    }

    /// Angle encoding with min-max scaling fitted to `data`.
    pub fn fit_angle(data: &TrainingSet) -> Result<Self> {
        Self::new(
            data.n_features(),
            EncodingScheme::Angle,
            &data.feature_ranges(),
        )
    }

    pub fn fit_repeated(data: &TrainingSet, n_qubits: usize) -> Result<Self> {
        Self::new(
            n_qubits,
            EncodingScheme::RepeatedAngle,
            &data.feature_ranges(),
        )
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_features(&self) -> usize {
        self.lo.len()
    }

    pub fn scheme(&self) -> EncodingScheme {
        self.scheme
    }

    /// Rotation angles in `[0, π]` for a raw feature vector.
    pub fn angles(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n_features() {
            return Err(Error::Shape(format!(
                "feature map expects {} features, got {}",
                self.n_features(),
                x.len()
            )));
        }
        x.iter()
            .enumerate()
            .map(|(j, &v)| {
                let (lo, hi) = (self.lo[j], self.hi[j]);
                let slack = DOMAIN_SLACK * (1.0 + (hi - lo).abs());
                if !v.is_finite() || v < lo - slack || v > hi + slack {
                    return Err(Error::Validation(format!(
                        "feature {j} = {v} outside the map domain [{lo}, {hi}]"
                    )));
                }
                if hi == lo {
                    return Ok(0.0);
                }
                Ok((PI * (v - lo) / (hi - lo)).clamp(0.0, PI))
            })
            .collect()
    }

    pub fn gates(&self, x: &[f64]) -> Result<Vec<GateOp>> {
        let a = self.angles(x)?;
        let p = a.len();
        let steps = match self.scheme {
            EncodingScheme::Angle => p,
            EncodingScheme::RepeatedAngle => p.max(self.n_qubits),
        };
        Ok((0..steps)
            .map(|i| GateOp::ry(i % self.n_qubits, a[i % p]))
            .collect())
    }
}

/// `|φ(x)⟩ = U_φ(x)|0…0⟩`.
pub fn encode(map: &FeatureMap, x: &[f64]) -> Result<QuantumState> {
    QuantumState::zero(map.n_qubits)?.apply_all(&map.gates(x)?)
}

/// Layered ansatz: each layer applies RY then RZ to every qubit, followed by
/// a ring of CNOTs (a single CNOT for two qubits, none for one).
///
/// Parameter `2·(l·n + q)` is the RY angle of qubit `q` in layer `l`, and the
/// next index is its RZ angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ansatz {
    n_qubits: usize,
    layers: usize,
}

impl Ansatz {
    pub fn new(n_qubits: usize, layers: usize) -> Result<Self> {
        crate::sim::check_qubit_count(n_qubits)?;
        if layers == 0 {
            return Err(Error::Domain("ansatz needs at least one layer".into()));
        }
        Ok(Self { n_qubits, layers })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn parameter_count(&self) -> usize {
        2 * self.n_qubits * self.layers
    }

    fn check(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.parameter_count() {
            return Err(Error::Shape(format!(
                "ansatz has {} parameters, got {}",
                self.parameter_count(),
                theta.len()
            )));
        }
        Ok(())
    }

    pub fn gates(&self, theta: &[f64]) -> Result<Vec<GateOp>> {
        self.check(theta)?;
        let n = self.n_qubits;
        let ring = match n {
            1 => 0,
            2 => 1,
            _ => n,
        };
        let mut gates = Vec::with_capacity(self.layers * (2 * n + ring));
        for l in 0..self.layers {
            for q in 0..n {
                let k = 2 * (l * n + q);
                gates.push(GateOp::ry(q, theta[k]));
                gates.push(GateOp::rz(q, theta[k + 1]));
            }
            for q in 0..ring {
                gates.push(GateOp::cnot(q, (q + 1) % n));
            }
        }
        Ok(gates)
    }
}

fn circuit_output(input: &QuantumState, ansatz: &Ansatz, theta: &[f64]) -> Result<f64> {
    let state = input.apply_all(&ansatz.gates(theta)?)?;
    state.expectation(&Observable::z(0))
}

fn check_pair(map: &FeatureMap, ansatz: &Ansatz) -> Result<()> {
    if map.n_qubits != ansatz.n_qubits {
        return Err(Error::Shape(format!(
            "feature map on {} qubits, ansatz on {}",
            map.n_qubits, ansatz.n_qubits
        )));
    }
    Ok(())
}

/// `f(x; θ) = ⟨Z₀⟩` of `U(θ)U_φ(x)|0…0⟩`.
pub fn model_output(map: &FeatureMap, ansatz: &Ansatz, theta: &[f64], x: &[f64]) -> Result<f64> {
    check_pair(map, ansatz)?;
    circuit_output(&encode(map, x)?, ansatz, theta)
}

/// Estimate of `f(x; θ)` from `shots` measurements of qubit 0.
pub fn model_output_sampled<R: Rng + ?Sized>(
    map: &FeatureMap,
    ansatz: &Ansatz,
    theta: &[f64],
    x: &[f64],
    shots: usize,
    rng: &mut R,
) -> Result<f64> {
    check_pair(map, ansatz)?;
    let state = encode(map, x)?.apply_all(&ansatz.gates(theta)?)?;
    let counts = state.measure_probabilities(&[0])?.sample(shots, rng)?;
    Ok((counts[0] as f64 - counts[1] as f64) / shots as f64)
}

/// Label from a model output; zero maps to +1.
pub fn classify(output: f64) -> i8 {
    if output >= 0.0 {
        1
    } else {
        -1
    }
}

pub fn predict(map: &FeatureMap, ansatz: &Ansatz, theta: &[f64], x: &[f64]) -> Result<i8> {
    model_output(map, ansatz, theta, x).map(classify)
}

/// `½(f(θ + π/2·e_j) − f(θ − π/2·e_j))`.
pub fn parameter_shift_grad(
    map: &FeatureMap,
    ansatz: &Ansatz,
    theta: &[f64],
    x: &[f64],
    j: usize,
) -> Result<f64> {
    check_pair(map, ansatz)?;
    ansatz.check(theta)?;
    if j >= theta.len() {
        return Err(Error::Domain(format!(
            "parameter {j} out of range for {}",
            theta.len()
        )));
    }
    let input = encode(map, x)?;
    shifted_difference(&input, ansatz, theta, j, FRAC_PI_2).map(|d| d / 2.0)
}

fn shifted_difference(
    input: &QuantumState,
    ansatz: &Ansatz,
    theta: &[f64],
    j: usize,
    h: f64,
) -> Result<f64> {
    let mut t = theta.to_vec();
    t[j] = theta[j] + h;
    let plus = circuit_output(input, ansatz, &t)?;
    t[j] = theta[j] - h;
    let minus = circuit_output(input, ansatz, &t)?;
    Ok(plus - minus)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradientMethod {
    ParameterShift,
    /// Central difference with step [`FINITE_DIFFERENCE_STEP`].
    FiniteDifference,
}

impl GradientMethod {
    fn partial(
        self,
        input: &QuantumState,
        ansatz: &Ansatz,
        theta: &[f64],
        j: usize,
    ) -> Result<f64> {
        match self {
            Self::ParameterShift => {
                shifted_difference(input, ansatz, theta, j, FRAC_PI_2).map(|d| d / 2.0)
            }
            Self::FiniteDifference => {
                shifted_difference(input, ansatz, theta, j, FINITE_DIFFERENCE_STEP)
                    .map(|d| d / (2.0 * FINITE_DIFFERENCE_STEP))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Loss {
    /// Mean of `(f − y)²`.
    Mse,
    /// Mean of `ln(1 + e^{−y·f})`.
    Logistic,
}

impl Loss {
    pub fn value(self, output: f64, label: f64) -> f64 {
        match self {
            Self::Mse => (output - label).powi(2),
            Self::Logistic => (-label * output).exp().ln_1p(),
        }
    }

    pub fn derivative(self, output: f64, label: f64) -> f64 {
        match self {
            Self::Mse => 2.0 * (output - label),
            Self::Logistic => -label / (1.0 + (label * output).exp()),
        }
    }
}

/// Examples with real-valued targets; classification labels are ±1.
#[derive(Debug, Clone, Copy)]
pub struct Example<'a> {
    pub x: &'a [f64],
    pub target: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradientEstimate {
    pub partials: Vec<f64>,
    pub method: GradientMethod,
    /// Shifted circuits executed; forward passes for the loss are not counted.
    pub evaluations: usize,
}

/// Gradient of the mean loss over `batch` by the chain rule through
/// per-example circuit partials.
pub fn full_gradient(
    map: &FeatureMap,
    ansatz: &Ansatz,
    theta: &[f64],
    batch: &[Example<'_>],
    loss: Loss,
    method: GradientMethod,
) -> Result<GradientEstimate> {
    check_pair(map, ansatz)?;
    ansatz.check(theta)?;
    if batch.is_empty() {
        return Err(Error::Domain("gradient of an empty batch".into()));
    }
    let m = theta.len();
    let mut partials = vec![0.0; m];
    let mut evaluations = 0;
    for ex in batch {
        let input = encode(map, ex.x)?;
        let weight =
            loss.derivative(circuit_output(&input, ansatz, theta)?, ex.target) / batch.len() as f64;
        for (j, p) in partials.iter_mut().enumerate() {
            *p += weight * method.partial(&input, ansatz, theta, j)?;
            evaluations += 2;
        }
    }
    if let Some(j) = partials.iter().position(|v| !v.is_finite()) {
        return Err(Error::Evaluation(format!(
            "gradient entry {j} is not finite"
        )));
    }
    Ok(GradientEstimate {
        partials,
        method,
        evaluations,
    })
}

pub fn mean_loss(
    map: &FeatureMap,
    ansatz: &Ansatz,
    theta: &[f64],
    batch: &[Example<'_>],
    loss: Loss,
) -> Result<f64> {
    let mut total = 0.0;
    for ex in batch {
        total += loss.value(model_output(map, ansatz, theta, ex.x)?, ex.target);
    }
    Ok(total / batch.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Init {
    /// Uniform on `[0, 2π)`.
    Uniform,
    /// Normal with mean 0 and standard deviation 0.1.
    Small,
}

impl Init {
    pub fn sample<R: Rng + ?Sized>(self, count: usize, rng: &mut R) -> Vec<f64> {
        match self {
            Self::Uniform => (0..count)
                .map(|_| rng.random_range(0.0..2.0 * PI))
                .collect(),
            Self::Small => {
                let normal = Normal::new(0.0, 0.1).expect("valid normal parameters");
                (0..count).map(|_| normal.sample(rng)).collect()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub seed: u64,
    pub loss: Loss,
    pub gradient: GradientMethod,
    pub init: Init,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.1,
            epochs: 200,
            seed: 42,
            loss: Loss::Mse,
            gradient: GradientMethod::ParameterShift,
            init: Init::Uniform,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::Domain(format!(
                "learning rate {} must be positive",
                self.learning_rate
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainResult {
    pub theta: Vec<f64>,
    /// Loss before the first step followed by the loss after each epoch.
    pub history: Vec<f64>,
}

/// Full-batch gradient descent from parameters drawn with `config.init`.
pub fn train(
    data: &TrainingSet,
    map: &FeatureMap,
    ansatz: &Ansatz,
    config: &TrainConfig,
) -> Result<TrainResult> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let theta = config.init.sample(ansatz.parameter_count(), &mut rng);
    train_from(data, map, ansatz, config, theta)
}

/// Full-batch gradient descent from the given parameters.
pub fn train_from(
    data: &TrainingSet,
    map: &FeatureMap,
    ansatz: &Ansatz,
    config: &TrainConfig,
    theta: Vec<f64>,
) -> Result<TrainResult> {
    train_observed(data, map, ansatz, config, theta, |_, _, _| Ok(()))
}

/// As [`train_from`], calling `observe(epoch, θ, loss)` for the initial
/// parameters (epoch 0) and after every step.
pub fn train_observed<F>(
    data: &TrainingSet,
    map: &FeatureMap,
    ansatz: &Ansatz,
    config: &TrainConfig,
    mut theta: Vec<f64>,
    mut observe: F,
) -> Result<TrainResult>
where
    F: FnMut(usize, &[f64], f64) -> Result<()>,
{
    config.validate()?;
    check_pair(map, ansatz)?;
    ansatz.check(&theta)?;
    let rows: Vec<Vec<f64>> = data.rows().collect();
    let batch: Vec<Example<'_>> = rows
        .iter()
        .zip(data.labels())
        .map(|(x, &y)| Example {
            x,
            target: y as f64,
        })
        .collect();
    let mut history = Vec::with_capacity(config.epochs + 1);
    let check = |epoch: usize, loss: f64| {
        if loss.is_finite() {
            Ok(loss)
        } else {
            Err(Error::Divergence { epoch, loss })
        }
    };
    let loss = check(0, mean_loss(map, ansatz, &theta, &batch, config.loss)?)?;
    observe(0, &theta, loss)?;
    history.push(loss);
    for epoch in 1..=config.epochs {
        let grad = full_gradient(map, ansatz, &theta, &batch, config.loss, config.gradient)
            .map_err(|_| Error::Divergence {
                epoch,
                loss: f64::NAN,
            })?;
        for (t, g) in theta.iter_mut().zip(&grad.partials) {
            *t -= config.learning_rate * g;
        }
        let loss = check(epoch, mean_loss(map, ansatz, &theta, &batch, config.loss)?)?;
        observe(epoch, &theta, loss)?;
        history.push(loss);
    }
    Ok(TrainResult { theta, history })
}

pub fn training_error(
    data: &TrainingSet,
    map: &FeatureMap,
    ansatz: &Ansatz,
    theta: &[f64],
) -> Result<f64> {
    crate::baselines::holdout_error(|x| predict(map, ansatz, theta, x), data)
}

/// `Var[∂C/∂θ₀]` for `C = ⟨Z₀⟩` on `U(θ)|0…0⟩`, with `θ` uniform on
/// `[0, 2π)^M`. Each qubit count draws from its own seeded stream, so a row
/// does not depend on which other counts are in the table.
pub fn barren_diagnostic(
    qubits: &[usize],
    layers: usize,
    samples: usize,
    seed: u64,
) -> Result<Vec<(usize, f64)>> {
    if samples < 2 {
        return Err(Error::Domain("variance needs at least two samples".into()));
    }
    let mut table = Vec::with_capacity(qubits.len());
    for &n in qubits {
        let ansatz = Ansatz::new(n, layers)?;
        let input = QuantumState::zero(n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(n as u64);
        let grads = (0..samples)
            .map(|_| {
                let theta = Init::Uniform.sample(ansatz.parameter_count(), &mut rng);
                GradientMethod::ParameterShift.partial(&input, &ansatz, &theta, 0)
            })
            .collect::<Result<Vec<_>>>()?;
        let mean = grads.iter().sum::<f64>() / samples as f64;
        let var = grads.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / (samples - 1) as f64;
        table.push((n, var));
    }
    Ok(table)
}

/// Whether a variance table, ordered by qubit count, decays: the last entry
/// is strictly below the first and at most one adjacent pair increases.
pub fn barren_trend_holds(table: &[(usize, f64)]) -> bool {
    let (Some(first), Some(last)) = (table.first(), table.last()) else {
        return false;
    };
    let inversions = table.windows(2).filter(|w| w[1].1 > w[0].1).count();
    table.len() >= 2 && last.1 < first.1 && inversions <= 1
}

/// Plain-text parameter file: `n_qubits <n>`, `layers <L>`, then one value per line.
pub fn format_theta(ansatz: &Ansatz, theta: &[f64]) -> Result<String> {
    ansatz.check(theta)?;
    let mut out = format!("n_qubits {}\nlayers {}\n", ansatz.n_qubits, ansatz.layers);
    for t in theta {
        writeln!(out, "{t}").expect("writing to a String");
    }
    Ok(out)
}

pub fn parse_theta(text: &str) -> Result<(Ansatz, Vec<f64>)> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let mut header = |key: &str| -> Result<usize> {
        let (line, l) = lines.next().ok_or(Error::Data {
            line: 0,
            message: format!("missing {key}"),
        })?;
        l.strip_prefix(key)
            .and_then(|v| v.trim().parse().ok())
            .ok_or(Error::Data {
                line,
                message: format!("expected `{key} <integer>`"),
            })
    };
    let n = header("n_qubits")?;
    let layers = header("layers")?;
    let ansatz = Ansatz::new(n, layers).map_err(|e| Error::Data {
        line: 2,
        message: e.to_string(),
    })?;
    let mut theta = Vec::with_capacity(ansatz.parameter_count());
    for (line, l) in lines.filter(|(_, l)| !l.is_empty()) {
        theta.push(l.parse::<f64>().map_err(|_| Error::Data {
            line,
            message: format!("{l:?} is not a number"),
        })?);
    }
    ansatz.check(&theta).map_err(|e| Error::Data {
        line: 3 + theta.len(),
        message: e.to_string(),
    })?;
    Ok((ansatz, theta))
}

pub fn write_theta(path: &Path, ansatz: &Ansatz, theta: &[f64]) -> Result<()> {
    std::fs::write(path, format_theta(ansatz, theta)?)
        .map_err(|e| Error::Resource(format!("{}: {e}", path.display())))
}

pub fn read_theta(path: &Path) -> Result<(Ansatz, Vec<f64>)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Data {
        line: 0,
        message: format!("{}: {e}", path.display()),
    })?;
    parse_theta(&text)
}
