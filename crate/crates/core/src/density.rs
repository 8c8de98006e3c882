//! Dense density matrices and partial trace.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scalar::{czero, modulus, Complex, Scalar};
use crate::state::StateVector;

/// Largest register a dense density matrix may describe (4096 x 4096 entries).
pub const MAX_DENSITY_QUBITS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Scalar> {
    n_qubits: usize,
    entries: DMatrix<Complex<T>>,
}

/// Qubits of `[0, n_qubits)` not in `keep`, ascending.
pub(crate) fn complement(keep: &[usize], n_qubits: usize) -> Result<Vec<usize>> {
    if keep.is_empty() {
        return Err(Error::InvalidParameter("keep set is empty".into()));
    }
    for (i, &q) in keep.iter().enumerate() {
        if q >= n_qubits {
            return Err(Error::IndexOutOfRange { index: q, n_qubits });
        }
        if keep[..i].contains(&q) {
            return Err(Error::InvalidParameter(format!("qubit {q} repeated in keep set")));
        }
    }
    Ok((0..n_qubits).filter(|q| !keep.contains(q)).collect())
}

fn scatter(bits: &[usize], local: usize) -> usize {
    bits.iter()
        .enumerate()
        .filter(|(b, _)| local >> b & 1 == 1)
        .fold(0, |acc, (_, &q)| acc | 1 << q)
}

impl<T: Scalar> DensityMatrix<T> {
    /// `|psi><psi|`.
    pub fn from_state(state: &StateVector<T>) -> Result<Self> {
        let n = state.n_qubits();
        check_capacity(n)?;
        let v = DVector::from_column_slice(state.amplitudes());
        Ok(DensityMatrix {
            n_qubits: n,
            entries: &v * v.adjoint(),
        })
    }

    /// Validates hermiticity, unit trace and positivity before wrapping.
    pub fn from_matrix(entries: DMatrix<Complex<T>>) -> Result<Self> {
        let dim = entries.nrows();
        if dim != entries.ncols() || dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "density matrix must be square with power-of-two side, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let rho = Self::from_matrix_unchecked(dim.trailing_zeros() as usize, entries)?;
        let tol = T::tolerance();
        if rho.hermiticity_defect() > tol {
            return Err(Error::InvalidParameter("matrix is not Hermitian".into()));
        }
        let tr = rho.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidParameter(format!("trace {tr} != 1")));
        }
        let min = rho
            .eigenvalues()
            .iter()
            .copied()
            .fold(T::max_value().unwrap(), |a, b| a.min(b));
        if min < -T::tolerance() * T::lit(10.0) {
            return Err(Error::InvalidParameter(format!(
                "matrix is not positive semidefinite (min eigenvalue {min})"
            )));
        }
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(n_qubits: usize, entries: DMatrix<Complex<T>>) -> Result<Self> {
        check_capacity(n_qubits)?;
        debug_assert_eq!(entries.nrows(), 1 << n_qubits);
        Ok(DensityMatrix { n_qubits, entries })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex<T>> {
        &self.entries
    }

    pub fn trace(&self) -> Complex<T> {
        self.entries.trace()
    }

    /// Largest `|rho_ij - conj(rho_ji)|`.
    pub fn hermiticity_defect(&self) -> T {
        let d = self.dim();
        let mut worst = T::zero();
        for i in 0..d {
            for j in 0..=i {
                let dev = modulus(self.entries[(i, j)] - self.entries[(j, i)].conj());
                if dev > worst {
                    worst = dev;
                }
            }
        }
        worst
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<T> {
        hermitian_eigenvalues(&self.entries)
    }

    /// Traces out every qubit not in `keep`; qubit `keep[i]` becomes qubit `i`.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let env = complement(keep, self.n_qubits)?;
        let kd = 1usize << keep.len();
        let ed = 1usize << env.len();
        let keep_off: Vec<usize> = (0..kd).map(|l| scatter(keep, l)).collect();
        let env_off: Vec<usize> = (0..ed).map(|l| scatter(&env, l)).collect();
        let mut out = DMatrix::from_element(kd, kd, czero::<T>());
        for i in 0..kd {
            for j in 0..kd {
                let mut acc = czero();
                for e in &env_off {
                    acc += self.entries[(keep_off[i] | e, keep_off[j] | e)];
                }
                out[(i, j)] = acc;
            }
        }
        Self::from_matrix_unchecked(keep.len(), out)
    }

    /// `V rho V^dagger` for a unitary `V` of matching dimension.
    pub fn conjugated(&self, v: &DMatrix<Complex<T>>) -> Result<Self> {
        crate::gate::check_unitary(v, self.n_qubits)?;
        Self::from_matrix_unchecked(self.n_qubits, v * &self.entries * v.adjoint())
    }

    /// Convex combination `sum_i w_i rho_i`.
    pub fn mixture(parts: &[(T, &DensityMatrix<T>)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty mixture".into()))?;
        let dim = first.1.dim();
        let mut acc = DMatrix::from_element(dim, dim, czero::<T>());
        for (w, rho) in parts {
            if rho.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: rho.dim(),
                });
            }
            acc += rho.entries.map(|z| z.scale(*w));
        }
        Self::from_matrix(acc)
    }
}

fn check_capacity(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_DENSITY_QUBITS {
        return Err(Error::Capacity(format!(
            "dense density matrix needs 1..={MAX_DENSITY_QUBITS} qubits, got {n_qubits}"
        )));
    }
    Ok(())
}

fn to_faer<T: Scalar>(m: &DMatrix<Complex<T>>) -> faer::Mat<faer::c64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| {
        let z = m[(i, j)];
        faer::c64::new(z.re.as_f64(), z.im.as_f64())
    })
}

/// Ascending eigenvalues of a Hermitian matrix (only the lower triangle is read).
///
/// Solved in double precision with faer: nalgebra's symmetric QR iteration
/// returns NaN on some of the block-sparse differences this crate produces.
pub fn hermitian_eigenvalues<T: Scalar>(m: &DMatrix<Complex<T>>) -> Vec<T> {
    to_faer(m)
        .self_adjoint_eigenvalues(faer::Side::Lower)
        .expect("self-adjoint eigensolver converges")
        .into_iter()
        .map(T::lit)
        .collect()
}

/// Ascending eigenvalues and the matching orthonormal eigenvectors (as columns).
pub fn hermitian_eigen<T: Scalar>(m: &DMatrix<Complex<T>>) -> (Vec<T>, DMatrix<Complex<T>>) {
    let eig = to_faer(m)
        .self_adjoint_eigen(faer::Side::Lower)
        .expect("self-adjoint eigensolver converges");
    let (u, s) = (eig.U(), eig.S().column_vector());
    let values = (0..m.nrows()).map(|i| T::lit(s.get(i).re)).collect();
    let vectors = DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
        let z = u.get(i, j);
        Complex::new(T::lit(z.re), T::lit(z.im))
    });
    (values, vectors)
}
