use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{ComplexMatrix, DensityMatrix, MAX_QUBITS};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Sampling family for [`random_density`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateMode {
    /// Haar-random pure state on all qubits (generically entangled).
    PureHaar,
    /// Tensor product of independent Haar-random single-qubit pure states.
    ProductPure,
    /// Normalised Ginibre `G G†` (full rank almost surely).
    Mixed,
}

pub fn random_density<T: Real>(qubits: usize, mode: StateMode, seed: u64) -> Result<DensityMatrix<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_density_with(qubits, mode, &mut rng)
}

pub fn random_density_with<T: Real, R: Rng + ?Sized>(
    qubits: usize,
    mode: StateMode,
    rng: &mut R,
) -> Result<DensityMatrix<T>> {
    if qubits == 0 || qubits > MAX_QUBITS {
        return Err(Error::Dimension(format!("qubit count {qubits} outside 1..={MAX_QUBITS}")));
    }
    let dim = 1usize << qubits;
    Ok(match mode {
        StateMode::PureHaar => DensityMatrix::from_pure(&gaussian_vector(dim, rng))?,
        StateMode::ProductPure => {
            let mut rho = DensityMatrix::from_pure(&gaussian_vector::<T, _>(2, rng))?;
            for _ in 1..qubits {
                rho = rho.tensor(&DensityMatrix::from_pure(&gaussian_vector(2, rng))?);
            }
            rho
        }
        StateMode::Mixed => {
            let g = ComplexMatrix::from_row_major(gaussian_vector(dim * dim, rng))?;
            let w = g.matmul(&g.adjoint());
            let tr = w.trace().re;
            let mut w = w.scale(T::one() / tr);
            for i in 0..dim {
                w[(i, i)] = Complex::new(w[(i, i)].re, T::zero());
            }
            DensityMatrix::from_valid(w)
        }
    })
}

fn gaussian_vector<T: Real, R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<Complex<T>> {
    (0..len)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex::new(T::lit(re), T::lit(im))
        })
        .collect()
}

/// Uniformly distributed unit vector on the 2-sphere.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-9 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}
