//! Gate operations: kind, target/control wiring, and local matrices.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{c, cone, czero, Complex, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    H,
    X,
    Ry,
    /// `Ry` with at least one control.
    Cry,
    /// `H` on the first target followed by `CNOT(first -> second)`.
    BellPrep,
    /// Adjoint of [`GateKind::BellPrep`].
    BellUnprep,
    RawUnitary,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Ry => "RY",
            GateKind::Cry => "CRY",
            GateKind::BellPrep => "BELL_PREP",
            GateKind::BellUnprep => "BELL_UNPREP",
            GateKind::RawUnitary => "RAW_UNITARY",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "H" => GateKind::H,
            "X" => GateKind::X,
            "RY" => GateKind::Ry,
            "CRY" => GateKind::Cry,
            "BELL_PREP" => GateKind::BellPrep,
            "BELL_UNPREP" => GateKind::BellUnprep,
            "RAW_UNITARY" => GateKind::RawUnitary,
            _ => return None,
        })
    }

    pub fn has_theta(self) -> bool {
        matches!(self, GateKind::Ry | GateKind::Cry)
    }

    pub fn is_bell(self) -> bool {
        matches!(self, GateKind::BellPrep | GateKind::BellUnprep)
    }

    fn fixed_arity(self) -> Option<usize> {
        match self {
            GateKind::H | GateKind::X | GateKind::Ry | GateKind::Cry => Some(1),
            GateKind::BellPrep | GateKind::BellUnprep => Some(2),
            GateKind::RawUnitary => None,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A control qubit together with the value it must hold for the gate to fire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Control {
    pub qubit: usize,
    pub on_one: bool,
}

impl Control {
    pub fn one(qubit: usize) -> Self {
        Control { qubit, on_one: true }
    }

    pub fn zero(qubit: usize) -> Self {
        Control { qubit, on_one: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateOp<T: Scalar> {
    pub kind: GateKind,
    /// Ordered targets; `targets[i]` maps to bit `i` of the local matrix index.
    pub targets: Vec<usize>,
    pub controls: Vec<Control>,
    pub theta: Option<T>,
    pub matrix: Option<DMatrix<Complex<T>>>,
}

impl<T: Scalar> GateOp<T> {
    fn simple(kind: GateKind, targets: Vec<usize>, theta: Option<T>) -> Self {
        GateOp {
            kind,
            targets,
            controls: Vec::new(),
            theta,
            matrix: None,
        }
    }

    pub fn h(q: usize) -> Self {
        Self::simple(GateKind::H, vec![q], None)
    }

    pub fn x(q: usize) -> Self {
        Self::simple(GateKind::X, vec![q], None)
    }

    pub fn ry(q: usize, theta: T) -> Self {
        Self::simple(GateKind::Ry, vec![q], Some(theta))
    }

    pub fn cry(controls: Vec<Control>, q: usize, theta: T) -> Self {
        GateOp {
            controls,
            ..Self::simple(GateKind::Cry, vec![q], Some(theta))
        }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self::x(target).controlled(vec![Control::one(control)])
    }

    pub fn bell_prep(a: usize, b: usize) -> Self {
        Self::simple(GateKind::BellPrep, vec![a, b], None)
    }

    pub fn bell_unprep(a: usize, b: usize) -> Self {
        Self::simple(GateKind::BellUnprep, vec![a, b], None)
    }

    /// Explicit unitary on `targets`; checked for shape and unitarity.
    pub fn raw(matrix: DMatrix<Complex<T>>, targets: Vec<usize>) -> Result<Self> {
        check_unitary(&matrix, targets.len())?;
        Ok(GateOp {
            kind: GateKind::RawUnitary,
            targets,
            controls: Vec::new(),
            theta: None,
            matrix: Some(matrix),
        })
    }

    /// Adds controls. An `RY` that gains controls becomes a `CRY`.
    pub fn controlled(mut self, controls: Vec<Control>) -> Self {
        self.controls.extend(controls);
        if self.kind == GateKind::Ry && !self.controls.is_empty() {
            self.kind = GateKind::Cry;
        }
        self
    }

    pub fn inverse(&self) -> Self {
        let mut inv = self.clone();
        match self.kind {
            GateKind::H | GateKind::X => {}
            GateKind::Ry | GateKind::Cry => inv.theta = self.theta.map(|t| -t),
            GateKind::BellPrep => inv.kind = GateKind::BellUnprep,
            GateKind::BellUnprep => inv.kind = GateKind::BellPrep,
            GateKind::RawUnitary => inv.matrix = self.matrix.as_ref().map(|m| m.adjoint()),
        }
        inv
    }

    /// Checks the wiring and parameter invariants against a register of `n_qubits`.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        if self.targets.is_empty() {
            return Err(Error::InvalidGate(format!("{} has no targets", self.kind)));
        }
        if let Some(arity) = self.kind.fixed_arity() {
            if self.targets.len() != arity {
                return Err(Error::InvalidGate(format!(
                    "{} expects {arity} target(s), got {}",
                    self.kind,
                    self.targets.len()
                )));
            }
        }
        if self.kind.has_theta() != self.theta.is_some() {
            return Err(Error::InvalidGate(format!(
                "theta must be present exactly for RY/CRY (kind {})",
                self.kind
            )));
        }
        if self.kind == GateKind::Cry && self.controls.is_empty() {
            return Err(Error::InvalidGate("CRY requires at least one control".into()));
        }
        if self.kind == GateKind::Ry && !self.controls.is_empty() {
            return Err(Error::InvalidGate("controlled RY must be tagged CRY".into()));
        }
        validate_wires(&self.targets, &self.controls, n_qubits)?;
        match (&self.matrix, self.kind) {
            (Some(m), GateKind::RawUnitary) => check_unitary(m, self.targets.len()),
            (None, GateKind::RawUnitary) => {
                Err(Error::InvalidGate("RAW_UNITARY without a matrix".into()))
            }
            (Some(_), kind) => Err(Error::InvalidGate(format!("{kind} carries a matrix"))),
            (None, _) => Ok(()),
        }
    }

    /// Bit mask of the control qubits and the value they must match.
    pub fn control_mask(&self) -> (usize, usize) {
        self.controls.iter().fold((0, 0), |(mask, value), c| {
            (mask | 1 << c.qubit, value | (c.on_one as usize) << c.qubit)
        })
    }

    /// The uncontrolled local matrix on `targets`.
    pub fn local_matrix(&self) -> DMatrix<Complex<T>> {
        match self.kind {
            GateKind::H => hadamard(),
            GateKind::X => pauli_x(),
            GateKind::Ry | GateKind::Cry => ry_matrix(self.theta.expect("validated theta")),
            GateKind::BellPrep => bell_prep_matrix(),
            GateKind::BellUnprep => bell_prep_matrix().adjoint(),
            GateKind::RawUnitary => self.matrix.clone().expect("validated matrix"),
        }
    }
}

pub fn hadamard<T: Scalar>() -> DMatrix<Complex<T>> {
    let s = c(T::lit(std::f64::consts::FRAC_1_SQRT_2), T::zero());
    DMatrix::from_row_slice(2, 2, &[s, s, s, -s])
}

pub fn pauli_x<T: Scalar>() -> DMatrix<Complex<T>> {
    DMatrix::from_row_slice(2, 2, &[czero(), cone(), cone(), czero()])
}

/// `[[cos t/2, -sin t/2], [sin t/2, cos t/2]]`, so that `RY(2 pi) = -I`.
pub fn ry_matrix<T: Scalar>(theta: T) -> DMatrix<Complex<T>> {
    let half = theta / T::lit(2.0);
    let (s, co) = (half.sin(), half.cos());
    DMatrix::from_row_slice(
        2,
        2,
        &[c(co, T::zero()), c(-s, T::zero()), c(s, T::zero()), c(co, T::zero())],
    )
}

/// `CNOT(0 -> 1) * (H on 0)` in the two-qubit local basis (bit 0 = first target).
pub fn bell_prep_matrix<T: Scalar>() -> DMatrix<Complex<T>> {
    let mut h0 = DMatrix::from_element(4, 4, czero::<T>());
    let hm = hadamard::<T>();
    for b in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                h0[(i | b << 1, j | b << 1)] = hm[(i, j)];
            }
        }
    }
    let mut cnot = DMatrix::from_element(4, 4, czero::<T>());
    for idx in 0..4usize {
        let out = if idx & 1 == 1 { idx ^ 2 } else { idx };
        cnot[(out, idx)] = cone();
    }
    cnot * h0
}

/// Targets and controls must be distinct and inside `[0, n_qubits)`.
pub fn validate_wires(targets: &[usize], controls: &[Control], n_qubits: usize) -> Result<()> {
    let mut seen = Vec::with_capacity(targets.len() + controls.len());
    for q in targets.iter().copied().chain(controls.iter().map(|c| c.qubit)) {
        if q >= n_qubits {
            return Err(Error::IndexOutOfRange { index: q, n_qubits });
        }
        if seen.contains(&q) {
            return Err(Error::InvalidGate(format!("qubit {q} used more than once")));
        }
        seen.push(q);
    }
    Ok(())
}

/// Errors unless `m` is a `2^n_targets` square unitary within tolerance.
pub fn check_unitary<T: Scalar>(m: &DMatrix<Complex<T>>, n_targets: usize) -> Result<()> {
    let dim = 1usize << n_targets;
    if m.nrows() != dim || m.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: m.nrows().max(m.ncols()),
        });
    }
    let product = m.adjoint() * m;
    let mut worst = T::zero();
    for i in 0..dim {
        for j in 0..dim {
            let expect = if i == j { T::one() } else { T::zero() };
            let z = product[(i, j)];
            let dev = (z.re - expect).abs().max(z.im.abs());
            if dev > worst {
                worst = dev;
            }
        }
    }
    if worst > T::tolerance() {
        return Err(Error::NotUnitary(worst.as_f64()));
    }
    Ok(())
}
