use num_complex::Complex;

use super::{hermitian_eigenvalues, ComplexMatrix, Pauli, MAX_QUBITS};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Real 3-vector `(r_x, r_y, r_z)` parametrising a qubit as `(I + r.σ)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlochVector<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> BlochVector<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn from_array([x, y, z]: [T; 3]) -> Self {
        Self { x, y, z }
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    pub fn norm(self) -> T {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

/// Hermitian, unit-trace, positive semidefinite matrix on `qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    matrix: ComplexMatrix<T>,
    qubits: usize,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates trace, hermiticity and positivity (eigenvalues ≥ -1e-12).
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        let qubits = qubits_for_dim(matrix.dim())?;
        let tol = T::tol(1e-12);
        let tr = matrix.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        if !matrix.is_hermitian(tol) {
            return Err(Error::InvalidState("matrix is not Hermitian".into()));
        }
        let eig = hermitian_eigenvalues(&matrix)?;
        if let Some(&min) = eig.last() {
            if min < -tol {
                return Err(Error::InvalidState(format!("negative eigenvalue {min}")));
            }
        }
        Ok(Self { matrix, qubits })
    }

    /// Wraps a matrix already known to be a valid state (channel outputs,
    /// tensor products of states).
    pub(crate) fn from_valid(matrix: ComplexMatrix<T>) -> Self {
        let qubits = qubits_for_dim(matrix.dim()).expect("power-of-two dimension");
        Self { matrix, qubits }
    }

    /// The pure state `|ψ><ψ|`; `psi` is normalised here.
    pub fn from_pure(psi: &[Complex<T>]) -> Result<Self> {
        let norm = psi.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
        if norm <= T::zero() {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        qubits_for_dim(psi.len())?;
        let v: Vec<_> = psi.iter().map(|z| z / norm).collect();
        Ok(Self::from_valid(ComplexMatrix::outer(&v)))
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(qubits: usize) -> Self {
        let dim = 1usize << qubits;
        Self::from_valid(ComplexMatrix::identity(dim).scale(T::one() / T::from_usize_lossy(dim)))
    }

    /// `|0...0><0...0|`, the all-`|z+>` product state.
    pub fn all_z_plus(qubits: usize) -> Self {
        let mut m = ComplexMatrix::zeros(1usize << qubits);
        m[(0, 0)] = Complex::new(T::one(), T::zero());
        Self::from_valid(m)
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `ρ ⊗ σ`.
    pub fn tensor(&self, other: &Self) -> Self {
        Self::from_valid(self.matrix.kron(&other.matrix))
    }

    /// `ρ - I/d`, the deviation from the maximally mixed state.
    pub fn deviation_from_mixed(&self) -> ComplexMatrix<T> {
        &self.matrix - Self::maximally_mixed(self.qubits).matrix()
    }
}

pub(crate) fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::Dimension(format!("dimension {dim} is not a power of two ≥ 2")));
    }
    let n = dim.trailing_zeros() as usize;
    if n > MAX_QUBITS {
        return Err(Error::Dimension(format!("{n} qubits exceeds the cap of {MAX_QUBITS}")));
    }
    Ok(n)
}

/// `(I + r_x X + r_y Y + r_z Z) / 2`.
pub fn bloch_to_density<T: Real>(r: BlochVector<T>) -> Result<DensityMatrix<T>> {
    if r.norm() > T::one() + T::tol(1e-12) {
        return Err(Error::InvalidState(format!("Bloch vector norm {} exceeds 1", r.norm())));
    }
    let h = T::half();
    let m = &(&Pauli::I.matrix::<T>() + &Pauli::X.matrix::<T>().scale(r.x))
        + &(&Pauli::Y.matrix::<T>().scale(r.y) + &Pauli::Z.matrix::<T>().scale(r.z));
    Ok(DensityMatrix::from_valid(m.scale(h)))
}

/// `r_i = tr(σ_i ρ)`.
pub fn density_to_bloch<T: Real>(rho: &DensityMatrix<T>) -> Result<BlochVector<T>> {
    if rho.qubits() != 1 {
        return Err(Error::Dimension(format!("expected a single qubit, got {}", rho.qubits())));
    }
    Ok(bloch_of_operator(rho.matrix()))
}

/// Pauli expansion coefficients `tr(σ_i A)` of a 2×2 operator.
pub(crate) fn bloch_of_operator<T: Real>(a: &ComplexMatrix<T>) -> BlochVector<T> {
    let comp = |p: Pauli| p.matrix::<T>().matmul(a).trace().re;
    BlochVector::new(comp(Pauli::X), comp(Pauli::Y), comp(Pauli::Z))
}
