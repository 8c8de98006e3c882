//! Register bookkeeping for the cause (A), effect (B) and reference registers.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::state::MAX_STATE_QUBITS;

/// `ceil(log2(n))` for `n >= 1`.
pub fn ceil_log2(n: usize) -> usize {
    assert!(n >= 1, "ceil_log2 of zero");
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

/// Qubit counts implied by `(k, d)`, without any capacity check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LayoutDims {
    pub k: usize,
    pub d: usize,
    pub n_a: usize,
    pub n_b: usize,
    pub n_ref: usize,
    pub total_qubits: usize,
}

impl LayoutDims {
    pub fn new(k: usize, d: usize) -> Result<Self> {
        if k == 0 || d == 0 {
            return Err(Error::InvalidParameter(format!("k and d must be >= 1 (k={k}, d={d})")));
        }
        let n_a = k
            .checked_mul(d)
            .ok_or_else(|| Error::Capacity("k*d overflows".into()))?;
        let n_ref = ceil_log2(n_a);
        Ok(LayoutDims {
            k,
            d,
            n_a,
            n_b: n_a,
            n_ref,
            total_qubits: 2 * n_a + n_ref,
        })
    }
}

/// Global qubit map: A occupies `[0, N_A)`, B `[N_A, 2 N_A)`, the reference the rest.
///
/// Variable `i` of A (or B) owns the `d` consecutive qubits starting at `i * d`
/// within its register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegisterLayout {
    dims: LayoutDims,
}

impl RegisterLayout {
    pub fn new(k: usize, d: usize) -> Result<Self> {
        let dims = LayoutDims::new(k, d)?;
        if dims.total_qubits > MAX_STATE_QUBITS {
            return Err(Error::Capacity(format!(
                "layout k={k}, d={d} needs {} qubits, cap is {MAX_STATE_QUBITS}",
                dims.total_qubits
            )));
        }
        Ok(RegisterLayout { dims })
    }

    pub fn dims(&self) -> LayoutDims {
        self.dims
    }

    pub fn k(&self) -> usize {
        self.dims.k
    }

    pub fn d(&self) -> usize {
        self.dims.d
    }

    pub fn n_a(&self) -> usize {
        self.dims.n_a
    }

    pub fn n_b(&self) -> usize {
        self.dims.n_b
    }

    pub fn n_ref(&self) -> usize {
        self.dims.n_ref
    }

    pub fn total_qubits(&self) -> usize {
        self.dims.total_qubits
    }

    /// Number of qubits the oracle acts on (A and B together).
    pub fn oracle_qubits(&self) -> usize {
        self.n_a() + self.n_b()
    }

    pub fn a(&self, i: usize) -> usize {
        assert!(i < self.n_a());
        i
    }

    pub fn b(&self, i: usize) -> usize {
        assert!(i < self.n_b());
        self.n_a() + i
    }

    pub fn reference(&self, i: usize) -> usize {
        assert!(i < self.n_ref());
        2 * self.n_a() + i
    }

    pub fn a_qubits(&self) -> Vec<usize> {
        (0..self.n_a()).map(|i| self.a(i)).collect()
    }

    pub fn b_qubits(&self) -> Vec<usize> {
        (0..self.n_b()).map(|i| self.b(i)).collect()
    }

    pub fn reference_qubits(&self) -> Vec<usize> {
        (0..self.n_ref()).map(|i| self.reference(i)).collect()
    }

    /// Qubit of bit `bit` of cause variable `var`.
    pub fn a_var(&self, var: usize, bit: usize) -> usize {
        assert!(var < self.k() && bit < self.d());
        self.a(var * self.d() + bit)
    }

    /// Qubit of bit `bit` of effect variable `var`.
    pub fn b_var(&self, var: usize, bit: usize) -> usize {
        assert!(var < self.k() && bit < self.d());
        self.b(var * self.d() + bit)
    }
}
