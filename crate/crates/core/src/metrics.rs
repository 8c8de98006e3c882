//! Choi states of unitary circuits, process distances, and optimal two-state
//! discrimination error.
//!
//! Choi states of unitaries are kept as pure vectors; every distance then has a
//! closed form in the overlap. Mixed inputs fall back to dense Hermitian
//! eigendecompositions.

use nalgebra::DMatrix;

use crate::circuit::Circuit;
use crate::density::{hermitian_eigen, hermitian_eigenvalues, DensityMatrix};
use crate::error::{Error, Result};
use crate::gate::GateOp;
use crate::scalar::{czero, modulus, norm_sqr, Complex, Scalar};
use crate::state::StateVector;

/// Largest channel (input qubit count) accepted by [`choi`].
pub const MAX_CHOI_CHANNEL_QUBITS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
enum ChoiRepr<T: Scalar> {
    Pure(StateVector<T>),
    Mixed(DensityMatrix<T>),
}

/// Normalized Choi state on `2 * n_qubits` qubits. Qubits `[0, n)` carry the
/// channel output, `[n, 2n)` the untouched half of the maximally entangled input.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix<T: Scalar> {
    n_qubits: usize,
    repr: ChoiRepr<T>,
}

impl<T: Scalar> ChoiMatrix<T> {
    /// Wraps an arbitrary Choi density matrix (e.g. of a mixed channel).
    pub fn from_density(rho: DensityMatrix<T>) -> Result<Self> {
        if !rho.n_qubits().is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "Choi state needs an even qubit count, got {}",
                rho.n_qubits()
            )));
        }
        Ok(ChoiMatrix {
            n_qubits: rho.n_qubits() / 2,
            repr: ChoiRepr::Mixed(rho),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// The pure Choi vector, when the channel is unitary.
    pub fn pure_state(&self) -> Option<&StateVector<T>> {
        match &self.repr {
            ChoiRepr::Pure(s) => Some(s),
            ChoiRepr::Mixed(_) => None,
        }
    }

    /// Dense density matrix; subject to the dense capacity limit.
    pub fn density(&self) -> Result<DensityMatrix<T>> {
        match &self.repr {
            ChoiRepr::Pure(s) => DensityMatrix::from_state(s),
            ChoiRepr::Mixed(rho) => Ok(rho.clone()),
        }
    }
}

/// `(I (x) U)|Phi><Phi|(I (x) U)^dagger` for the unitary of `circuit` on `n_qubits`.
pub fn choi<T: Scalar>(circuit: &Circuit<T>, n_qubits: usize) -> Result<ChoiMatrix<T>> {
    if n_qubits == 0 || n_qubits > MAX_CHOI_CHANNEL_QUBITS {
        return Err(Error::Capacity(format!(
            "Choi state supports 1..={MAX_CHOI_CHANNEL_QUBITS} channel qubits, got {n_qubits}"
        )));
    }
    if circuit.n_qubits() > n_qubits {
        return Err(Error::DimensionMismatch {
            expected: n_qubits,
            actual: circuit.n_qubits(),
        });
    }
    let mut state = StateVector::new_zero_state(2 * n_qubits)?;
    for q in 0..n_qubits {
        state.apply_gate(&GateOp::bell_prep(n_qubits + q, q))?;
    }
    circuit.apply(&mut state)?;
    Ok(ChoiMatrix {
        n_qubits,
        repr: ChoiRepr::Pure(state),
    })
}

/// Quantities of two unit vectors derived from `s = 1 - |<a|b>|`, computed
/// from the phase-aligned difference so that identical inputs give exactly 0.
#[derive(Debug, Clone, Copy)]
struct PureGap<T> {
    s: T,
}

impl<T: Scalar> PureGap<T> {
    fn new(a: &StateVector<T>, b: &StateVector<T>) -> Result<Self> {
        let ov = b.overlap(a)?;
        let mag = modulus(ov);
        let phase = if mag > T::zero() {
            ov.unscale(mag)
        } else {
            Complex::new(T::one(), T::zero())
        };
        let dist_sqr = a
            .amplitudes()
            .iter()
            .zip(b.amplitudes())
            .fold(T::zero(), |acc, (x, y)| acc + norm_sqr(*x - phase * y));
        let s = (dist_sqr / T::lit(2.0)).max(T::zero()).min(T::one());
        Ok(PureGap { s })
    }

    fn fidelity(self) -> T {
        let f = T::one() - self.s;
        f * f
    }

    fn trace_distance(self) -> T {
        (self.s * (T::lit(2.0) - self.s)).sqrt()
    }
}

fn check_same<T: Scalar>(a: &ChoiMatrix<T>, b: &ChoiMatrix<T>) -> Result<()> {
    if a.n_qubits != b.n_qubits {
        return Err(Error::DimensionMismatch {
            expected: 1 << (2 * a.n_qubits),
            actual: 1 << (2 * b.n_qubits),
        });
    }
    Ok(())
}

fn both_pure<'a, T: Scalar>(
    a: &'a ChoiMatrix<T>,
    b: &'a ChoiMatrix<T>,
) -> Option<(&'a StateVector<T>, &'a StateVector<T>)> {
    Some((a.pure_state()?, b.pure_state()?))
}

/// `(1/2) ||a - b||_1`.
pub fn trace_distance<T: Scalar>(a: &ChoiMatrix<T>, b: &ChoiMatrix<T>) -> Result<T> {
    check_same(a, b)?;
    match both_pure(a, b) {
        Some((x, y)) => Ok(PureGap::new(x, y)?.trace_distance()),
        None => trace_distance_dense(&a.density()?, &b.density()?),
    }
}

/// Uhlmann fidelity `(Tr sqrt(sqrt(a) b sqrt(a)))^2`; `|<a|b>|^2` for pure states.
pub fn process_fidelity<T: Scalar>(a: &ChoiMatrix<T>, b: &ChoiMatrix<T>) -> Result<T> {
    check_same(a, b)?;
    match both_pure(a, b) {
        Some((x, y)) => Ok(PureGap::new(x, y)?.fidelity()),
        None => fidelity_dense(&a.density()?, &b.density()?),
    }
}

/// `2 (1 - sqrt(F))`, ranging over `[0, 2]`.
pub fn bures_distance<T: Scalar>(a: &ChoiMatrix<T>, b: &ChoiMatrix<T>) -> Result<T> {
    let f = process_fidelity(a, b)?;
    Ok(T::lit(2.0) * (T::one() - f.max(T::zero()).min(T::one()).sqrt()))
}

/// `Tr[(a - b)^2]`.
pub fn hs_distance<T: Scalar>(a: &ChoiMatrix<T>, b: &ChoiMatrix<T>) -> Result<T> {
    check_same(a, b)?;
    match both_pure(a, b) {
        Some((x, y)) => {
            let s = PureGap::new(x, y)?.s;
            Ok(T::lit(2.0) * s * (T::lit(2.0) - s))
        }
        None => hs_distance_dense(&a.density()?, &b.density()?),
    }
}

fn difference<T: Scalar>(a: &DensityMatrix<T>, b: &DensityMatrix<T>) -> Result<DMatrix<Complex<T>>> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            actual: b.dim(),
        });
    }
    Ok(a.entries() - b.entries())
}

/// `(1/2) sum |lambda_i(a - b)|`.
pub fn trace_distance_dense<T: Scalar>(a: &DensityMatrix<T>, b: &DensityMatrix<T>) -> Result<T> {
    let diff = difference(a, b)?;
    let norm = hermitian_eigenvalues(&diff)
        .into_iter()
        .fold(T::zero(), |acc, l| acc + l.abs());
    Ok((norm / T::lit(2.0)).min(T::one()))
}

/// `Tr[(a - b)^2]` as the squared Frobenius norm of the Hermitian difference.
pub fn hs_distance_dense<T: Scalar>(a: &DensityMatrix<T>, b: &DensityMatrix<T>) -> Result<T> {
    let diff = difference(a, b)?;
    Ok(diff.iter().fold(T::zero(), |acc, z| acc + norm_sqr(*z)))
}

/// Eigenvalues below this are rounding noise of an exact zero; their square
/// roots would otherwise leak `sqrt(eps)` into the fidelity.
fn spectral_floor<T: Scalar>() -> T {
    T::tolerance() * T::lit(1e-3)
}

fn clamped_sqrt<T: Scalar>(l: T) -> T {
    if l > spectral_floor() {
        l.sqrt()
    } else {
        T::zero()
    }
}

fn psd_sqrt<T: Scalar>(m: &DMatrix<Complex<T>>) -> DMatrix<Complex<T>> {
    let (values, vectors) = hermitian_eigen(m);
    let roots = nalgebra::DVector::from_iterator(
        values.len(),
        values.iter().map(|l| Complex::new(clamped_sqrt(*l), T::zero())),
    );
    &vectors * DMatrix::from_diagonal(&roots) * vectors.adjoint()
}

/// Uhlmann fidelity via eigendecompositions.
pub fn fidelity_dense<T: Scalar>(a: &DensityMatrix<T>, b: &DensityMatrix<T>) -> Result<T> {
    difference(a, b)?;
    let root = psd_sqrt(a.entries());
    let inner = &root * b.entries() * &root;
    let tr = hermitian_eigenvalues(&inner)
        .into_iter()
        .fold(T::zero(), |acc, l| acc + clamped_sqrt(l));
    Ok((tr * tr).min(T::one()))
}

/// Minimum equal-prior error of discriminating `rho0` from `rho1`.
pub fn helstrom_error<T: Scalar>(rho0: &DensityMatrix<T>, rho1: &DensityMatrix<T>) -> Result<T> {
    let td = trace_distance_dense(rho0, rho1)?;
    Ok((T::one() - td) / T::lit(2.0))
}

/// [`helstrom_error`] for pure states: `(1 - sqrt(1 - |<a|b>|^2)) / 2`.
pub fn helstrom_error_pure<T: Scalar>(a: &StateVector<T>, b: &StateVector<T>) -> Result<T> {
    let td = PureGap::new(a, b)?.trace_distance();
    Ok((T::one() - td) / T::lit(2.0))
}

/// Trace norm of `sum_i |p_i><p_i| - sum_j |n_j><n_j|` without forming the
/// matrices. With `V = QR` (columns `p_i` then `n_j`) the operator is
/// `Q (R S R^dagger) Q^dagger`, `S` the diagonal of signs, so its nonzero
/// spectrum is that of the small Hermitian `R S R^dagger`.
pub fn trace_norm_low_rank<T: Scalar>(
    positive: &[Vec<Complex<T>>],
    negative: &[Vec<Complex<T>>],
) -> Result<T> {
    let vectors: Vec<(&Vec<Complex<T>>, T)> = positive
        .iter()
        .map(|v| (v, T::one()))
        .chain(negative.iter().map(|v| (v, -T::one())))
        .filter(|(v, _)| v.iter().any(|z| *z != czero()))
        .collect();
    let Some(len) = vectors.first().map(|(v, _)| v.len()) else {
        return Ok(T::zero());
    };
    if let Some((v, _)) = vectors.iter().find(|(v, _)| v.len() != len) {
        return Err(Error::DimensionMismatch {
            expected: len,
            actual: v.len(),
        });
    }
    let m = vectors.len();
    let columns = DMatrix::from_fn(len, m, |i, j| vectors[j].0[i]);
    let r = columns.qr().r();
    let signs = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        m,
        vectors.iter().map(|(_, s)| Complex::new(*s, T::zero())),
    ));
    let core = &r * signs * r.adjoint();
    Ok(hermitian_eigenvalues(&core)
        .into_iter()
        .fold(T::zero(), |acc, l| acc + l.abs()))
}

/// Helstrom error between `sum |p_i><p_i|` and `sum |n_j><n_j|` (each of unit trace).
pub fn helstrom_error_ensembles<T: Scalar>(
    rho0: &[Vec<Complex<T>>],
    rho1: &[Vec<Complex<T>>],
) -> Result<T> {
    let td = (trace_norm_low_rank(rho0, rho1)? / T::lit(2.0)).min(T::one());
    Ok((T::one() - td) / T::lit(2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::GateOp;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn single(op: GateOp<f64>) -> Circuit<f64> {
        let mut c = Circuit::new(1);
        c.push(op).unwrap();
        c
    }

    #[test]
    fn identity_choi_is_bell_projector() {
        let ch = choi(&Circuit::<f64>::new(1), 1).unwrap();
        let rho = ch.density().unwrap();
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert!((rho.entries()[(i, j)].re - 0.5).abs() < 1e-12);
        }
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn x_choi_is_psi_plus() {
        let ch = choi(&single(GateOp::x(0)), 1).unwrap();
        let rho = ch.density().unwrap();
        for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            assert!((rho.entries()[(i, j)].re - 0.5).abs() < 1e-12);
        }
        assert!(rho.entries()[(0, 0)].norm() < 1e-12);
        let ev = rho.eigenvalues();
        assert!((ev[3] - 1.0).abs() < 1e-12 && ev[..3].iter().all(|l| l.abs() < 1e-12));
    }

    #[test]
    fn choi_capacity() {
        assert!(matches!(choi(&Circuit::<f64>::new(9), 9), Err(Error::Capacity(_))));
        assert!(choi(&Circuit::<f64>::new(3), 2).is_err());
    }

    #[test]
    fn distances_identical_and_orthogonal() {
        let id = choi(&Circuit::<f64>::new(1), 1).unwrap();
        let x = choi(&single(GateOp::x(0)), 1).unwrap();
        assert_eq!(trace_distance(&id, &id).unwrap(), 0.0);
        assert_eq!(bures_distance(&id, &id).unwrap(), 0.0);
        assert_eq!(hs_distance(&id, &id).unwrap(), 0.0);
        assert_eq!(process_fidelity(&id, &id).unwrap(), 1.0);
        assert!((trace_distance(&id, &x).unwrap() - 1.0).abs() < 1e-12);
        assert!(process_fidelity(&id, &x).unwrap().abs() < 1e-12);
        assert!((bures_distance(&id, &x).unwrap() - 2.0).abs() < 1e-12);
        assert!((hs_distance(&id, &x).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn mismatched_dimensions() {
        let one = choi(&Circuit::<f64>::new(1), 1).unwrap();
        let two = choi(&Circuit::<f64>::new(2), 2).unwrap();
        assert!(trace_distance(&one, &two).is_err());
        assert!(hs_distance(&one, &two).is_err());
        assert!(process_fidelity(&one, &two).is_err());
    }

    #[test]
    fn helstrom_cases() {
        let zero = StateVector::<f64>::new_zero_state(1).unwrap();
        let one = StateVector::<f64>::basis_state(1, 1).unwrap();
        let mut plus = zero.clone();
        plus.apply_gate(&GateOp::h(0)).unwrap();
        assert_eq!(helstrom_error_pure(&zero, &zero).unwrap(), 0.5);
        assert!(helstrom_error_pure(&zero, &one).unwrap().abs() < 1e-12);
        let want = 0.5 * (1.0 - FRAC_1_SQRT_2);
        assert!((helstrom_error_pure(&zero, &plus).unwrap() - want).abs() < 1e-12);
        let r0 = DensityMatrix::from_state(&zero).unwrap();
        let rp = DensityMatrix::from_state(&plus).unwrap();
        assert!((helstrom_error(&r0, &rp).unwrap() - want).abs() < 1e-12);
        assert_eq!(helstrom_error(&r0, &r0).unwrap(), 0.5);
    }

    #[test]
    fn low_rank_matches_dense() {
        let mut s = StateVector::<f64>::new_zero_state(3).unwrap();
        s.apply_gate(&GateOp::h(2)).unwrap();
        s.apply_gate(&GateOp::bell_prep(0, 1)).unwrap();
        let mut t = s.clone();
        t.apply_gate(&GateOp::ry(1, PI / 3.0).controlled(vec![crate::gate::Control::one(2)]))
            .unwrap();
        let keep = [0, 1];
        let env = [2];
        let dense = helstrom_error(
            &s.reduced_density(&keep).unwrap(),
            &t.reduced_density(&keep).unwrap(),
        )
        .unwrap();
        let low = helstrom_error_ensembles(
            &s.environment_blocks(&keep, &env),
            &t.environment_blocks(&keep, &env),
        )
        .unwrap();
        assert!((dense - low).abs() < 1e-12, "{dense} vs {low}");
    }
}
