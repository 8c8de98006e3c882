//! Seeded random states, unitaries and density matrices (Haar / Gaussian based).

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::density::DensityMatrix;
use crate::error::Result;
use crate::scalar::{modulus, Complex, Scalar};
use crate::state::StateVector;

fn gaussian<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::lit(re), T::lit(im))
}

/// Haar-random pure state on `n_qubits`.
pub fn random_state<T: Scalar, R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Result<StateVector<T>> {
    let amps = (0..1usize << n_qubits).map(|_| gaussian(rng)).collect();
    StateVector::from_unnormalized(amps)
}

/// Haar-random `dim x dim` unitary (QR of a Ginibre matrix with phases fixed).
pub fn random_unitary<T: Scalar, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<Complex<T>> {
    let g = DMatrix::from_fn(dim, dim, |_, _| gaussian::<T, R>(rng));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        let d = r[(j, j)];
        let m = modulus(d);
        if m > T::zero() {
            let phase = d.unscale(m);
            q.column_mut(j).iter_mut().for_each(|z| *z *= phase);
        }
    }
    q
}

/// Random density matrix of the given rank: an equal-weight mixture of
/// `rank` random pure states with random weights.
pub fn random_density<T: Scalar, R: Rng + ?Sized>(
    n_qubits: usize,
    rank: usize,
    rng: &mut R,
) -> Result<DensityMatrix<T>> {
    let weights: Vec<f64> = (0..rank.max(1)).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    let states = weights
        .iter()
        .map(|_| random_state::<T, R>(n_qubits, rng).and_then(|s| DensityMatrix::from_state(&s)))
        .collect::<Result<Vec<_>>>()?;
    let parts: Vec<(T, &DensityMatrix<T>)> = weights
        .iter()
        .zip(&states)
        .map(|(w, s)| (T::lit(w / total), s))
        .collect();
    DensityMatrix::mixture(&parts)
}
