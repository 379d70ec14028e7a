//! Dense complex linear algebra for small qubit systems.
//!
//! Everything here is sized for desk-scale checks: matrices are dense and
//! row-major, and the qubit count is capped at [`MAX_QUBITS`].

mod eigen;
mod matrix;
mod pauli;
mod random;
mod state;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

pub use eigen::hermitian_eigenvalues;
pub use matrix::{tensor, ComplexMatrix};
pub use pauli::Pauli;
pub use random::{random_density, random_density_with, random_unit_vector, StateMode};
pub use state::{bloch_to_density, density_to_bloch, BlochVector, DensityMatrix};

pub(crate) use state::bloch_of_operator;

use crate::error::{Error, Result};
use crate::scalar::{xlog2x, Real};

/// Hard cap on the number of qubits a dense matrix may describe.
pub const MAX_QUBITS: usize = 10;

/// Supported Schatten norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchattenP {
    Two,
    Inf,
}

impl FromStr for SchattenP {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "2" | "two" => Ok(SchattenP::Two),
            "inf" | "infinity" | "∞" | "op" => Ok(SchattenP::Inf),
            other => Err(Error::Argument(format!("unsupported Schatten norm p = {other}"))),
        }
    }
}

impl fmt::Display for SchattenP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchattenP::Two => "2",
            SchattenP::Inf => "inf",
        })
    }
}

/// Schatten norm of a Hermitian matrix.
///
/// `p = 2` is computed as the Frobenius norm, which equals the root sum of
/// squared eigenvalues for Hermitian input.
pub fn schatten_norm<T: Real>(a: &ComplexMatrix<T>, p: SchattenP) -> Result<T> {
    match p {
        SchattenP::Two => {
            if !a.is_hermitian(T::tol(1e-10)) {
                return Err(Error::Precondition("matrix is not Hermitian".into()));
            }
            Ok(a.frobenius_norm())
        }
        SchattenP::Inf => {
            let eig = hermitian_eigenvalues(a)?;
            Ok(eig.iter().fold(T::zero(), |acc, l| acc.max(l.abs())))
        }
    }
}

/// Shannon entropy in bits, with `0 log 0 = 0`.
pub fn shannon_entropy<T: Real>(weights: &[T]) -> Result<T> {
    validate_distribution(weights, T::tol(1e-10))?;
    Ok(weights.iter().fold(T::zero(), |acc, &p| acc + xlog2x(p)))
}

pub(crate) fn validate_distribution<T: Real>(weights: &[T], tol: T) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::InvalidDistribution("empty weight vector".into()));
    }
    if let Some(w) = weights.iter().find(|w| w.is_nan() || **w < T::zero()) {
        return Err(Error::InvalidDistribution(format!("negative or NaN weight {w}")));
    }
    let sum = weights.iter().fold(T::zero(), |a, &b| a + b);
    if (sum - T::one()).abs() > tol {
        return Err(Error::InvalidDistribution(format!("weights sum to {sum}, expected 1")));
    }
    Ok(())
}

/// `cos(φ) I + i sin(φ) (n.σ)`; the global phase is dropped.
pub fn unitary_from_axis_angle<T: Real>(phi: T, axis: [T; 3]) -> Result<ComplexMatrix<T>> {
    let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    if (norm - T::one()).abs() > T::tol(1e-10) {
        return Err(Error::Argument(format!("rotation axis has norm {norm}, expected 1")));
    }
    let (s, c) = phi.sin_cos();
    let gen = &(&Pauli::X.matrix::<T>().scale(axis[0]) + &Pauli::Y.matrix::<T>().scale(axis[1]))
        + &Pauli::Z.matrix::<T>().scale(axis[2]);
    Ok(&Pauli::I.matrix::<T>().scale(c) + &gen.scale_complex(Complex::new(T::zero(), s)))
}
