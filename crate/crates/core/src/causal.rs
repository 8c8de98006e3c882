//! Builders for the three circuit stages: initialization, the
//! reference-controlled permutation strategy, and the two oracle hypotheses.

use serde::Serialize;

use crate::circuit::{bell_cost, Circuit};
use crate::error::Result;
use crate::gate::{Control, GateOp};
use crate::layout::RegisterLayout;
use crate::scalar::Scalar;
use crate::strategy::{check_r, PermutationStrategy};

/// Gate resources of one permutation-strategy circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ResourceCount {
    pub k: usize,
    pub d: usize,
    pub r: usize,
    pub subsystem_qubits: usize,
    pub subsystem_dimension: u64,
    /// Reference-controlled Bell wirings (each unwiring and rewiring counts once).
    pub controlled_bell_count: u64,
    pub total_primitive_gates: u64,
}

/// Reference-register controls that fire when the register holds `value`.
fn reference_controls(layout: &RegisterLayout, value: usize) -> Vec<Control> {
    (0..layout.n_ref())
        .map(|bit| Control {
            qubit: layout.reference(bit),
            on_one: value >> bit & 1 == 1,
        })
        .collect()
}

/// Prepares a uniform superposition over reference values `0..r`.
///
/// Bits are split from the most significant down; each split is a rotation
/// controlled on the already-split higher bits.
fn reference_superposition<T: Scalar>(
    layout: &RegisterLayout,
    r: usize,
    circuit: &mut Circuit<T>,
) -> Result<()> {
    let n = layout.n_ref();
    let mut active: Vec<bool> = vec![false; n];
    for bit in (0..n).rev() {
        for prefix in 0..(1usize << (n - bit - 1)) {
            let in_branch = |j: &usize| j >> (bit + 1) == prefix;
            let w0 = (0..r).filter(in_branch).filter(|j| j >> bit & 1 == 0).count();
            let w1 = (0..r).filter(in_branch).filter(|j| j >> bit & 1 == 1).count();
            if w1 == 0 {
                continue;
            }
            let controls: Vec<Control> = (bit + 1..n)
                .filter(|&hb| active[hb])
                .map(|hb| Control {
                    qubit: layout.reference(hb),
                    on_one: prefix >> (hb - bit - 1) & 1 == 1,
                })
                .collect();
            let target = layout.reference(bit);
            let op = if w0 == w1 {
                GateOp::h(target)
            } else {
                let angle = T::lit(2.0 * (w1 as f64).sqrt().atan2((w0 as f64).sqrt()));
                GateOp::ry(target, angle)
            };
            circuit.push(op.controlled(controls))?;
            active[bit] = true;
        }
    }
    Ok(())
}

/// Initialization: uniform reference superposition over `r` values and a Bell
/// pair on every `(A[i], B[i])`.
pub fn build_u_in<T: Scalar>(layout: &RegisterLayout, r: usize) -> Result<Circuit<T>> {
    check_r(layout, r)?;
    let mut circuit = Circuit::new(layout.total_qubits());
    reference_superposition(layout, r, &mut circuit)?;
    for i in 0..layout.n_a() {
        circuit.push(GateOp::bell_prep(layout.a(i), layout.b(i)))?;
    }
    Ok(circuit)
}

/// Permutation strategy: under reference value `j`, unwire the initial pairs
/// and rewire cause variable `i` to effect variable `pairings[j][i]`.
///
/// Reference values `>= r` are left untouched.
pub fn build_u_per<T: Scalar>(
    layout: &RegisterLayout,
    strategy: &PermutationStrategy,
) -> Result<(Circuit<T>, ResourceCount)> {
    strategy.validate(layout)?;
    let mut circuit = Circuit::new(layout.total_qubits());
    for (j, pairing) in strategy.pairings().iter().enumerate() {
        let controls = reference_controls(layout, j);
        for i in 0..layout.n_a() {
            circuit.push(GateOp::bell_unprep(layout.a(i), layout.b(i)).controlled(controls.clone()))?;
        }
        for (var, &partner) in pairing.iter().enumerate() {
            for bit in 0..layout.d() {
                let op = GateOp::bell_prep(layout.a_var(var, bit), layout.b_var(partner, bit));
                circuit.push(op.controlled(controls.clone()))?;
            }
        }
    }
    let count = ResourceCount {
        k: layout.k(),
        d: layout.d(),
        r: strategy.r(),
        subsystem_qubits: layout.n_a(),
        subsystem_dimension: 1u64 << layout.n_a(),
        controlled_bell_count: circuit.bell_gate_count() as u64,
        total_primitive_gates: circuit.primitive_count(),
    };
    Ok((circuit, count))
}

/// Resource count of [`build_u_per`] with `r` configurations, in closed form.
pub fn count_controlled_bell(layout: &RegisterLayout, r: usize) -> Result<ResourceCount> {
    check_r(layout, r)?;
    let n_ref = layout.n_ref();
    let per_config = 2 * layout.n_a() as u64;
    let primitive = (0..r)
        .map(|j| {
            let zeros = n_ref - (j as u32).count_ones() as usize;
            per_config * bell_cost(n_ref, zeros)
        })
        .sum();
    Ok(ResourceCount {
        k: layout.k(),
        d: layout.d(),
        r,
        subsystem_qubits: layout.n_a(),
        subsystem_dimension: 1u64 << layout.n_a(),
        controlled_bell_count: per_config * r as u64,
        total_primitive_gates: primitive,
    })
}

/// Identity oracle on A and B: no gates.
pub fn build_null_oracle<T: Scalar>(layout: &RegisterLayout) -> Circuit<T> {
    Circuit::new(layout.oracle_qubits())
}

/// `P_1 (x) RY(theta)^{(x)N_B} + (I - P_1) (x) I`, with `P_1` the projector of A
/// onto all ones: one `RY(theta)` per B qubit, controlled on every A qubit.
pub fn build_alternate_oracle<T: Scalar>(layout: &RegisterLayout, theta: T) -> Result<Circuit<T>> {
    let mut circuit = Circuit::new(layout.oracle_qubits());
    let controls: Vec<Control> = layout.a_qubits().into_iter().map(Control::one).collect();
    for q in layout.b_qubits() {
        circuit.push(GateOp::cry(controls.clone(), q, theta))?;
    }
    Ok(circuit)
}
