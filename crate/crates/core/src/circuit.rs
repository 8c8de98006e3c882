//! Ordered gate lists, their text serialization, and a primitive-gate cost model.
//!
//! Text format, one gate per line:
//!
//! ```text
//! KIND targets=[t0,t1] controls=[q:1,r:0] theta=<float> matrix=[re:im,...]
//! ```
//!
//! `controls` entries are `qubit:polarity` (1 fires on |1>, 0 on |0>). `theta`
//! appears only for `RY`/`CRY`, `matrix` (row-major) only for `RAW_UNITARY`.
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::gate::{Control, GateKind, GateOp};
use crate::scalar::{c, Complex, Scalar};
use crate::state::StateVector;

/// Largest register for which [`Circuit::unitary`] builds a dense matrix.
pub const MAX_UNITARY_QUBITS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit<T: Scalar> {
    n_qubits: usize,
    ops: Vec<GateOp<T>>,
}

impl<T: Scalar> Circuit<T> {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            ops: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[GateOp<T>] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn push(&mut self, op: GateOp<T>) -> Result<()> {
        op.validate(self.n_qubits)?;
        self.ops.push(op);
        Ok(())
    }

    pub fn extend(&mut self, other: &Circuit<T>) -> Result<()> {
        if other.n_qubits > self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                actual: other.n_qubits,
            });
        }
        self.ops.extend(other.ops.iter().cloned());
        Ok(())
    }

    /// Reversed list of inverted gates.
    pub fn inverse(&self) -> Self {
        Circuit {
            n_qubits: self.n_qubits,
            ops: self.ops.iter().rev().map(GateOp::inverse).collect(),
        }
    }

    pub fn apply(&self, state: &mut StateVector<T>) -> Result<()> {
        if state.n_qubits() < self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                actual: state.n_qubits(),
            });
        }
        self.ops.iter().try_for_each(|op| state.apply_gate(op))
    }

    /// Dense unitary, column `j` being the image of basis state `j`.
    pub fn unitary(&self) -> Result<DMatrix<Complex<T>>> {
        if self.n_qubits > MAX_UNITARY_QUBITS {
            return Err(Error::Capacity(format!(
                "dense unitary limited to {MAX_UNITARY_QUBITS} qubits, circuit has {}",
                self.n_qubits
            )));
        }
        let dim = 1usize << self.n_qubits;
        let mut u = DMatrix::from_element(dim, dim, c(T::zero(), T::zero()));
        for j in 0..dim {
            let mut s = StateVector::basis_state(self.n_qubits, j)?;
            self.apply(&mut s)?;
            for (i, a) in s.amplitudes().iter().enumerate() {
                u[(i, j)] = *a;
            }
        }
        Ok(u)
    }

    /// Number of Bell preparation/unpreparation gates.
    pub fn bell_gate_count(&self) -> usize {
        self.ops.iter().filter(|op| op.kind.is_bell()).count()
    }

    /// Gate count after lowering every op to one-qubit gates and CNOTs.
    pub fn primitive_count(&self) -> u64 {
        self.ops.iter().map(primitive_cost).sum()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for op in &self.ops {
            out.push_str(&op_to_line(op));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str, n_qubits: usize) -> Result<Self> {
        let mut circuit = Circuit::new(n_qubits);
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let op = parse_line(line).map_err(|message| Error::Parse {
                line: idx + 1,
                message,
            })?;
            circuit.push(op).map_err(|e| Error::Parse {
                line: idx + 1,
                message: e.to_string(),
            })?;
        }
        Ok(circuit)
    }
}

/// Lowering cost of an `n_controls`-controlled X: Toffoli-free gray-code
/// construction for two or more controls.
pub fn mcx_cost(n_controls: usize) -> u64 {
    match n_controls {
        0 | 1 => 1,
        c => gray_code_cost(c),
    }
}

/// Lowering cost of an `n_controls`-controlled single-qubit unitary.
pub fn mcu_cost(n_controls: usize) -> u64 {
    match n_controls {
        0 => 1,
        c => gray_code_cost(c),
    }
}

/// `2^c - 1` singly-controlled roots (2 CNOT + 3 one-qubit gates each) plus
/// `2^c - 2` parity CNOTs.
fn gray_code_cost(n_controls: usize) -> u64 {
    let p = 1u64 << n_controls;
    5 * (p - 1) + (p - 2)
}

/// Lowering cost of a (possibly controlled) Bell wiring: controlled H plus a
/// CNOT carrying one extra control.
pub fn bell_cost(n_controls: usize, zero_controls: usize) -> u64 {
    mcu_cost(n_controls) + mcx_cost(n_controls + 1) + 2 * zero_controls as u64
}

fn primitive_cost<T: Scalar>(op: &GateOp<T>) -> u64 {
    let n = op.controls.len();
    let zeros = op.controls.iter().filter(|c| !c.on_one).count();
    match op.kind {
        GateKind::X => mcx_cost(n) + 2 * zeros as u64,
        GateKind::H | GateKind::Ry | GateKind::Cry => mcu_cost(n) + 2 * zeros as u64,
        GateKind::BellPrep | GateKind::BellUnprep => bell_cost(n, zeros),
        // Opaque in this model.
        GateKind::RawUnitary => 1 + 2 * zeros as u64,
    }
}

fn op_to_line<T: Scalar>(op: &GateOp<T>) -> String {
    let mut line = String::from(op.kind.name());
    let targets: Vec<String> = op.targets.iter().map(|t| t.to_string()).collect();
    let controls: Vec<String> = op
        .controls
        .iter()
        .map(|c| format!("{}:{}", c.qubit, c.on_one as u8))
        .collect();
    let _ = write!(
        line,
        " targets=[{}] controls=[{}]",
        targets.join(","),
        controls.join(",")
    );
    if let Some(theta) = op.theta {
        let _ = write!(line, " theta={theta}");
    }
    if let Some(m) = &op.matrix {
        let mut entries = Vec::with_capacity(m.len());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                entries.push(format!("{}:{}", z.re, z.im));
            }
        }
        let _ = write!(line, " matrix=[{}]", entries.join(","));
    }
    line
}

fn bracketed<'a>(field: &'a str, key: &str) -> std::result::Result<&'a str, String> {
    field
        .strip_prefix(key)
        .and_then(|rest| rest.strip_prefix("=["))
        .and_then(|rest| rest.strip_suffix(']'))
        .ok_or_else(|| format!("malformed field `{field}`, expected {key}=[...]"))
}

fn parse_num<N: std::str::FromStr>(s: &str) -> std::result::Result<N, String> {
    s.trim().parse().map_err(|_| format!("bad number `{s}`"))
}

fn parse_line<T: Scalar>(line: &str) -> std::result::Result<GateOp<T>, String> {
    let mut fields = line.split_whitespace();
    let name = fields.next().ok_or("empty line")?;
    let kind = GateKind::from_name(name).ok_or_else(|| format!("unknown gate kind `{name}`"))?;
    let mut op = GateOp {
        kind,
        targets: Vec::new(),
        controls: Vec::new(),
        theta: None,
        matrix: None,
    };
    for field in fields {
        if field.starts_with("targets=") {
            let body = bracketed(field, "targets")?;
            op.targets = body
                .split(',')
                .filter(|s| !s.is_empty())
                .map(parse_num)
                .collect::<std::result::Result<_, _>>()?;
        } else if field.starts_with("controls=") {
            let body = bracketed(field, "controls")?;
            for entry in body.split(',').filter(|s| !s.is_empty()) {
                let (q, pol) = entry
                    .split_once(':')
                    .ok_or_else(|| format!("control `{entry}` lacks polarity"))?;
                let on_one = match pol {
                    "1" => true,
                    "0" => false,
                    _ => return Err(format!("bad polarity `{pol}`")),
                };
                op.controls.push(Control {
                    qubit: parse_num(q)?,
                    on_one,
                });
            }
        } else if let Some(v) = field.strip_prefix("theta=") {
            op.theta = Some(parse_num(v)?);
        } else if field.starts_with("matrix=") {
            let body = bracketed(field, "matrix")?;
            let entries: Vec<Complex<T>> = body
                .split(',')
                .map(|e| {
                    let (re, im) = e
                        .split_once(':')
                        .ok_or_else(|| format!("matrix entry `{e}` lacks imaginary part"))?;
                    Ok(c(parse_num(re)?, parse_num(im)?))
                })
                .collect::<std::result::Result<_, String>>()?;
            let side = (entries.len() as f64).sqrt() as usize;
            if side * side != entries.len() {
                return Err(format!("matrix has {} entries, not a square", entries.len()));
            }
            op.matrix = Some(DMatrix::from_row_slice(side, side, &entries));
        } else {
            return Err(format!("unknown field `{field}`"));
        }
    }
    Ok(op)
}
