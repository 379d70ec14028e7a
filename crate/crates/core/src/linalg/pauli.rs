use std::fmt;

use num_complex::Complex;

use super::ComplexMatrix;
use crate::scalar::Real;

/// Single-qubit Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix<T: Real>(self) -> ComplexMatrix<T> {
        let o = Complex::new(T::zero(), T::zero());
        let one = Complex::new(T::one(), T::zero());
        let i = Complex::new(T::zero(), T::one());
        match self {
            Pauli::I => ComplexMatrix::from_rows([[one, o], [o, one]]),
            Pauli::X => ComplexMatrix::from_rows([[o, one], [one, o]]),
            Pauli::Y => ComplexMatrix::from_rows([[o, -i], [i, o]]),
            Pauli::Z => ComplexMatrix::from_rows([[one, o], [o, -one]]),
        }
    }

    /// True for X and Y, the letters that anticommute with Z.
    pub fn flips_z(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        };
        write!(f, "{c}")
    }
}
