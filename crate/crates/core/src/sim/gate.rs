use nalgebra::DMatrix;
use num_complex::Complex64;

use super::NORM_TOLERANCE;
use crate::{linalg, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    H,
    X,
    /// `exp(-iθY/2)`.
    Ry(f64),
    /// `exp(-iθZ/2)`.
    Rz(f64),
    /// X on the target, conditioned on the control qubit.
    Cnot,
    /// `diag(1, e^{iφ})` on the target, conditioned on the control qubit.
    ControlledPhase(f64),
    Swap,
    /// Arbitrary unitary on the targets; combine with controls for a
    /// controlled-unitary.
    Unitary(DMatrix<Complex64>),
    /// Uniformly controlled RY: angle `k` is applied when the controls, read
    /// little-endian, hold the value `k`. Control values are ignored.
    MultiplexedRy(Vec<f64>),
}

/// A gate together with its placement in a register.
///
/// `control_value` is a bitmask over `controls`: bit `i` is the value that
/// `controls[i]` must hold for the gate to act. The default is all ones.
#[derive(Debug, Clone, PartialEq)]
pub struct GateOp {
    kind: GateKind,
    targets: Vec<usize>,
    controls: Vec<usize>,
    control_value: usize,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl GateOp {
    fn single(kind: GateKind, target: usize) -> Self {
        Self {
            kind,
            targets: vec![target],
            controls: Vec::new(),
            control_value: 0,
        }
    }

    pub fn h(target: usize) -> Self {
        Self::single(GateKind::H, target)
    }

    pub fn x(target: usize) -> Self {
        Self::single(GateKind::X, target)
    }

    pub fn ry(target: usize, angle: f64) -> Self {
        Self::single(GateKind::Ry(angle), target)
    }

    pub fn rz(target: usize, angle: f64) -> Self {
        Self::single(GateKind::Rz(angle), target)
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self::single(GateKind::Cnot, target).with_controls(&[control], 1)
    }

    pub fn controlled_phase(control: usize, target: usize, angle: f64) -> Self {
        Self::single(GateKind::ControlledPhase(angle), target).with_controls(&[control], 1)
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Self {
            kind: GateKind::Swap,
            targets: vec![a, b],
            controls: Vec::new(),
            control_value: 0,
        }
    }

    /// One RY angle per value of the `select` register (`select[b]` is bit `b`).
    pub fn multiplexed_ry(target: usize, select: &[usize], angles: Vec<f64>) -> Self {
        Self {
            kind: GateKind::MultiplexedRy(angles),
            targets: vec![target],
            controls: select.to_vec(),
            control_value: 0,
        }
    }

    /// Dense unitary on `targets`; `targets[b]` is bit `b` of the matrix index.
    pub fn unitary(matrix: DMatrix<Complex64>, targets: &[usize]) -> Self {
        Self {
            kind: GateKind::Unitary(matrix),
            targets: targets.to_vec(),
            controls: Vec::new(),
            control_value: 0,
        }
    }

    /// Adds controls that fire when every listed qubit is `|1⟩`.
    pub fn controlled_by(self, controls: &[usize]) -> Self {
        let value = (1usize << controls.len()) - 1;
        self.controlled_on(controls, value)
    }

    /// Adds controls that fire when `controls[i]` equals bit `i` of `value`.
    pub fn controlled_on(self, controls: &[usize], value: usize) -> Self {
        self.with_controls(controls, value)
    }

    fn with_controls(mut self, controls: &[usize], value: usize) -> Self {
        let shift = self.controls.len();
        self.controls.extend_from_slice(controls);
        self.control_value |= value << shift;
        self
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn controls(&self) -> &[usize] {
        &self.controls
    }

    pub(crate) fn control_mask(&self) -> usize {
        self.controls.iter().map(|&q| 1usize << q).sum()
    }

    pub(crate) fn control_value(&self) -> usize {
        self.controls
            .iter()
            .enumerate()
            .filter(|(i, _)| (self.control_value >> i) & 1 == 1)
            .map(|(_, &q)| 1usize << q)
            .sum()
    }

    /// Matrix acting on the target sub-register. For a multiplexed rotation
    /// this is the rotation selected by the all-zero control value.
    pub fn matrix(&self) -> DMatrix<Complex64> {
        let zero = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        match &self.kind {
            GateKind::H => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                DMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)])
            }
            GateKind::X | GateKind::Cnot => DMatrix::from_row_slice(2, 2, &[zero, one, one, zero]),
            GateKind::Ry(t) => {
                let (s, co) = (t / 2.0).sin_cos();
                DMatrix::from_row_slice(2, 2, &[c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)])
            }
            GateKind::Rz(t) => {
                let half = t / 2.0;
                DMatrix::from_row_slice(
                    2,
                    2,
                    &[
                        Complex64::from_polar(1.0, -half),
                        zero,
                        zero,
                        Complex64::from_polar(1.0, half),
                    ],
                )
            }
            GateKind::ControlledPhase(phi) => {
                DMatrix::from_row_slice(2, 2, &[one, zero, zero, Complex64::from_polar(1.0, *phi)])
            }
            GateKind::Swap => {
                let mut m = DMatrix::from_element(4, 4, zero);
                m[(0, 0)] = one;
                m[(1, 2)] = one;
                m[(2, 1)] = one;
                m[(3, 3)] = one;
                m
            }
            GateKind::Unitary(m) => m.clone(),
            GateKind::MultiplexedRy(angles) => Self::ry(0, angles[0]).matrix(),
        }
    }

    /// Inverse gate with the same placement.
    pub fn adjoint(&self) -> Self {
        let kind = match &self.kind {
            GateKind::Ry(t) => GateKind::Ry(-t),
            GateKind::Rz(t) => GateKind::Rz(-t),
            GateKind::ControlledPhase(p) => GateKind::ControlledPhase(-p),
            GateKind::Unitary(m) => GateKind::Unitary(m.adjoint()),
            GateKind::MultiplexedRy(a) => GateKind::MultiplexedRy(a.iter().map(|t| -t).collect()),
            other => other.clone(),
        };
        Self {
            kind,
            ..self.clone()
        }
    }

    /// Checks placement against an `n_qubits` register and the unitarity of
    /// any user-supplied matrix.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let expected_targets = match self.kind {
            GateKind::Swap => Some(2),
            GateKind::Unitary(_) => None,
            _ => Some(1),
        };
        if let Some(k) = expected_targets {
            if self.targets.len() != k {
                return Err(Error::Validation(format!(
                    "{:?} acts on {k} target(s), got {}",
                    self.kind,
                    self.targets.len()
                )));
            }
        }
        if matches!(self.kind, GateKind::Cnot | GateKind::ControlledPhase(_))
            && self.controls.is_empty()
        {
            return Err(Error::Validation(
                "controlled gate without a control".into(),
            ));
        }
        if let GateKind::MultiplexedRy(angles) = &self.kind {
            if angles.len() != 1usize << self.controls.len() {
                return Err(Error::Shape(format!(
                    "{} angles for a {}-qubit select register",
                    angles.len(),
                    self.controls.len()
                )));
            }
        }
        if self.targets.is_empty() {
            return Err(Error::Validation("gate has no targets".into()));
        }
        let all = self.targets.iter().chain(&self.controls);
        for (i, &q) in all.clone().enumerate() {
            if q >= n_qubits {
                return Err(Error::Domain(format!(
                    "qubit {q} out of range for {n_qubits}-qubit register"
                )));
            }
            if all.clone().take(i).any(|&p| p == q) {
                return Err(Error::Validation(format!(
                    "qubit {q} appears more than once among targets and controls"
                )));
            }
        }
        if let GateKind::Unitary(m) = &self.kind {
            let dim = 1usize << self.targets.len();
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::Shape(format!(
                    "{}×{} matrix cannot act on {} qubit(s)",
                    m.nrows(),
                    m.ncols(),
                    self.targets.len()
                )));
            }
            if !linalg::is_unitary(m, NORM_TOLERANCE) {
                return Err(Error::Validation("embedded matrix is not unitary".into()));
            }
        }
        Ok(())
    }
}
