//! Dense statevector simulation.
//!
//! Qubit 0 is the least significant bit of the amplitude index.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::gate::{check_unitary, validate_wires, GateKind, GateOp};
use crate::scalar::{c, czero, norm_sqr, Complex, Scalar};

/// Largest register a dense statevector may hold.
pub const MAX_STATE_QUBITS: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T: Scalar> {
    n_qubits: usize,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Scalar> StateVector<T> {
    /// `|0...0>` on `n_qubits` qubits.
    pub fn new_zero_state(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_STATE_QUBITS {
            return Err(Error::Capacity(format!(
                "statevector needs 1..={MAX_STATE_QUBITS} qubits, got {n_qubits}"
            )));
        }
        let mut amplitudes = vec![czero(); 1 << n_qubits];
        amplitudes[0] = c(T::one(), T::zero());
        Ok(StateVector {
            n_qubits,
            amplitudes,
        })
    }

    pub fn basis_state(n_qubits: usize, index: usize) -> Result<Self> {
        let mut s = Self::new_zero_state(n_qubits)?;
        if index >= s.dim() {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} outside 2^{n_qubits}"
            )));
        }
        s.amplitudes[0] = czero();
        s.amplitudes[index] = c(T::one(), T::zero());
        Ok(s)
    }

    /// Wraps raw amplitudes; the length must be a power of two and the norm 1.
    pub fn from_amplitudes(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "amplitude count {len} is not a power of two >= 2"
            )));
        }
        let n_qubits = len.trailing_zeros() as usize;
        if n_qubits > MAX_STATE_QUBITS {
            return Err(Error::Capacity(format!("{n_qubits} qubits exceeds cap")));
        }
        let s = StateVector {
            n_qubits,
            amplitudes,
        };
        let dev = (s.norm() - T::one()).abs();
        if dev > T::tolerance() {
            return Err(Error::InvalidParameter(format!(
                "state not normalized (|norm - 1| = {dev})"
            )));
        }
        Ok(s)
    }

    /// Like [`Self::from_amplitudes`] but rescales to unit norm first.
    pub fn from_unnormalized(mut amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let n = amplitudes
            .iter()
            .fold(T::zero(), |acc, z| acc + norm_sqr(*z))
            .sqrt();
        if n <= T::zero() {
            return Err(Error::InvalidParameter("zero vector".into()));
        }
        amplitudes.iter_mut().for_each(|z| *z = z.unscale(n));
        Self::from_amplitudes(amplitudes)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amplitudes
    }

    pub fn norm(&self) -> T {
        self.amplitudes
            .iter()
            .fold(T::zero(), |acc, z| acc + norm_sqr(*z))
            .sqrt()
    }

    /// `<self|other>`.
    pub fn overlap(&self, other: &Self) -> Result<Complex<T>> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(czero(), |acc, (a, b)| acc + a.conj() * b))
    }

    /// Applies `op` in place.
    pub fn apply_gate(&mut self, op: &GateOp<T>) -> Result<()> {
        op.validate(self.n_qubits)?;
        let (mask, value) = op.control_mask();
        match op.kind {
            GateKind::BellPrep => {
                let (a, b) = (op.targets[0], op.targets[1]);
                let h = crate::gate::hadamard::<T>();
                self.apply_single(&h, a, mask, value);
                let x = crate::gate::pauli_x::<T>();
                self.apply_single(&x, b, mask | 1 << a, value | 1 << a);
            }
            GateKind::BellUnprep => {
                let (a, b) = (op.targets[0], op.targets[1]);
                let x = crate::gate::pauli_x::<T>();
                self.apply_single(&x, b, mask | 1 << a, value | 1 << a);
                let h = crate::gate::hadamard::<T>();
                self.apply_single(&h, a, mask, value);
            }
            _ if op.targets.len() == 1 => {
                let m = op.local_matrix();
                self.apply_single(&m, op.targets[0], mask, value);
            }
            _ => {
                let m = op.local_matrix();
                self.apply_multi(&m, &op.targets, mask, value);
            }
        }
        Ok(())
    }

    /// Applies an explicit unitary to `targets` (`targets[0]` is the matrix's low bit).
    pub fn apply_raw_unitary(
        &mut self,
        matrix: &DMatrix<Complex<T>>,
        targets: &[usize],
    ) -> Result<()> {
        check_unitary(matrix, targets.len())?;
        validate_wires(targets, &[], self.n_qubits)?;
        self.apply_multi(matrix, targets, 0, 0);
        Ok(())
    }

    fn apply_single(&mut self, m: &DMatrix<Complex<T>>, target: usize, mask: usize, value: usize) {
        let (m00, m01, m10, m11) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
        let stride = 1usize << target;
        let dim = self.amplitudes.len();
        let amps = &mut self.amplitudes;
        let mut base = 0;
        while base < dim {
            for i0 in base..base + stride {
                if i0 & mask != value {
                    continue;
                }
                let i1 = i0 | stride;
                let (a0, a1) = (amps[i0], amps[i1]);
                amps[i0] = m00 * a0 + m01 * a1;
                amps[i1] = m10 * a0 + m11 * a1;
            }
            base += stride << 1;
        }
    }

    fn apply_multi(
        &mut self,
        m: &DMatrix<Complex<T>>,
        targets: &[usize],
        mask: usize,
        value: usize,
    ) {
        let local_dim = 1usize << targets.len();
        let target_mask = targets.iter().fold(0usize, |acc, &t| acc | 1 << t);
        let offsets: Vec<usize> = (0..local_dim)
            .map(|l| {
                targets
                    .iter()
                    .enumerate()
                    .filter(|(bit, _)| l >> bit & 1 == 1)
                    .fold(0usize, |acc, (_, &t)| acc | 1 << t)
            })
            .collect();
        let mut gathered = vec![czero::<T>(); local_dim];
        for base in 0..self.amplitudes.len() {
            if base & target_mask != 0 || base & mask != value {
                continue;
            }
            for (g, off) in gathered.iter_mut().zip(&offsets) {
                *g = self.amplitudes[base | off];
            }
            for (row, off) in offsets.iter().enumerate() {
                let mut acc = czero();
                for (col, g) in gathered.iter().enumerate() {
                    acc += m[(row, col)] * g;
                }
                self.amplitudes[base | off] = acc;
            }
        }
    }

    /// Reduced density matrix on `keep`, computed directly from the amplitudes.
    ///
    /// Qubit `keep[i]` becomes qubit `i` of the result.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<crate::density::DensityMatrix<T>> {
        let env = crate::density::complement(keep, self.n_qubits)?;
        let blocks = self.environment_blocks(keep, &env);
        let kd = 1usize << keep.len();
        let mut rho = DMatrix::from_element(kd, kd, czero::<T>());
        for block in &blocks {
            for i in 0..kd {
                let bi = block[i];
                if bi == czero() {
                    continue;
                }
                for j in 0..kd {
                    rho[(i, j)] += bi * block[j].conj();
                }
            }
        }
        crate::density::DensityMatrix::from_matrix_unchecked(keep.len(), rho)
    }

    /// Unnormalized conditional vectors on `keep`, one per basis state of `env`.
    ///
    /// `sum_e |v_e><v_e|` is the reduced density matrix on `keep`.
    pub fn environment_blocks(&self, keep: &[usize], env: &[usize]) -> Vec<Vec<Complex<T>>> {
        let kd = 1usize << keep.len();
        let ed = 1usize << env.len();
        let scatter = |bits: &[usize], l: usize| {
            bits.iter()
                .enumerate()
                .filter(|(b, _)| l >> b & 1 == 1)
                .fold(0usize, |acc, (_, &q)| acc | 1 << q)
        };
        let keep_off: Vec<usize> = (0..kd).map(|l| scatter(keep, l)).collect();
        (0..ed)
            .map(|e| {
                let base = scatter(env, e);
                keep_off.iter().map(|o| self.amplitudes[base | o]).collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::{pauli_x, Control};
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn amps(s: &StateVector<f64>) -> Vec<(f64, f64)> {
        s.amplitudes().iter().map(|z| (z.re, z.im)).collect()
    }

    fn close(s: &StateVector<f64>, expect: &[(f64, f64)]) {
        for (got, want) in amps(s).iter().zip(expect) {
            assert!((got.0 - want.0).abs() < 1e-12 && (got.1 - want.1).abs() < 1e-12,
                "{:?} vs {:?}", amps(s), expect);
        }
    }

    #[test]
    fn zero_state_layout() {
        let s = StateVector::<f64>::new_zero_state(1).unwrap();
        close(&s, &[(1.0, 0.0), (0.0, 0.0)]);
        let s = StateVector::<f64>::new_zero_state(2).unwrap();
        close(&s, &[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        assert!(matches!(StateVector::<f64>::new_zero_state(25), Err(Error::Capacity(_))));
        assert!(matches!(StateVector::<f64>::new_zero_state(0), Err(Error::Capacity(_))));
    }

    #[test]
    fn named_gates_on_basis_states() {
        let mut s = StateVector::<f64>::new_zero_state(1).unwrap();
        s.apply_gate(&GateOp::h(0)).unwrap();
        close(&s, &[(FRAC_1_SQRT_2, 0.0), (FRAC_1_SQRT_2, 0.0)]);

        let mut s = StateVector::<f64>::new_zero_state(1).unwrap();
        s.apply_gate(&GateOp::ry(0, PI)).unwrap();
        close(&s, &[(0.0, 0.0), (1.0, 0.0)]);

        let mut s = StateVector::<f64>::new_zero_state(2).unwrap();
        s.apply_gate(&GateOp::bell_prep(0, 1)).unwrap();
        close(&s, &[(FRAC_1_SQRT_2, 0.0), (0.0, 0.0), (0.0, 0.0), (FRAC_1_SQRT_2, 0.0)]);
    }

    #[test]
    fn raw_x_flips_least_significant_qubit() {
        let mut s = StateVector::<f64>::new_zero_state(2).unwrap();
        s.apply_raw_unitary(&pauli_x(), &[0]).unwrap();
        assert_eq!(s, StateVector::basis_state(2, 1).unwrap());
    }

    #[test]
    fn raw_x_on_bell_pair() {
        let mut s = StateVector::<f64>::new_zero_state(2).unwrap();
        s.apply_gate(&GateOp::bell_prep(0, 1)).unwrap();
        s.apply_raw_unitary(&pauli_x(), &[1]).unwrap();
        // (|10> + |01>)/sqrt2: indices 1 and 2
        close(&s, &[(0.0, 0.0), (FRAC_1_SQRT_2, 0.0), (FRAC_1_SQRT_2, 0.0), (0.0, 0.0)]);
    }

    #[test]
    fn raw_identity_leaves_state() {
        let mut s = StateVector::<f64>::new_zero_state(3).unwrap();
        s.apply_gate(&GateOp::h(2)).unwrap();
        s.apply_gate(&GateOp::ry(0, 0.7)).unwrap();
        let before = s.clone();
        s.apply_raw_unitary(&DMatrix::identity(4, 4), &[2, 0]).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn raw_unitary_errors() {
        let mut s = StateVector::<f64>::new_zero_state(2).unwrap();
        assert!(matches!(
            s.apply_raw_unitary(&DMatrix::identity(4, 4), &[0]),
            Err(Error::DimensionMismatch { .. })
        ));
        let bad = DMatrix::from_element(2, 2, c(1.0, 0.0));
        assert!(matches!(s.apply_raw_unitary(&bad, &[0]), Err(Error::NotUnitary(_))));
        assert!(matches!(
            s.apply_raw_unitary(&pauli_x(), &[5]),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn control_polarity() {
        let mut s = StateVector::<f64>::new_zero_state(2).unwrap();
        s.apply_gate(&GateOp::x(1).controlled(vec![Control::zero(0)])).unwrap();
        assert_eq!(s, StateVector::basis_state(2, 2).unwrap());
        s.apply_gate(&GateOp::x(0).controlled(vec![Control::zero(1)])).unwrap();
        assert_eq!(s, StateVector::basis_state(2, 2).unwrap());
    }

    #[test]
    fn overlaps() {
        let zero = StateVector::<f64>::new_zero_state(1).unwrap();
        let one = StateVector::<f64>::basis_state(1, 1).unwrap();
        let mut plus = zero.clone();
        plus.apply_gate(&GateOp::h(0)).unwrap();
        assert!((zero.overlap(&zero).unwrap().re - 1.0).abs() < 1e-15);
        assert_eq!(zero.overlap(&one).unwrap().norm(), 0.0);
        assert!((zero.overlap(&plus).unwrap().re - FRAC_1_SQRT_2).abs() < 1e-15);
        let two = StateVector::<f64>::new_zero_state(2).unwrap();
        assert!(zero.overlap(&two).is_err());
    }

    #[test]
    fn f32_statevector() {
        let mut s = StateVector::<f32>::new_zero_state(2).unwrap();
        s.apply_gate(&GateOp::bell_prep(0, 1)).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-6);
        assert!((s.amplitudes()[3].re - std::f32::consts::FRAC_1_SQRT_2).abs() < 1e-6);
    }
}
