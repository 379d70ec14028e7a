//! Approximate quantum encryption schemes.
//!
//! Optimal single-qubit Pauli schemes under an entropy budget, dominance of
//! Pauli schemes over general mixed-unitary schemes, exact worst-case norms of
//! independent n-qubit product schemes, and the small-bias-set construction
//! that fails in the operator norm.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the `*F64`
//! aliases below are what most callers want.

pub mod biased_sets;
pub mod error;
pub mod general_scheme;
pub mod linalg;
pub mod product_scheme;
pub mod qubit_pauli;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type ComplexMatrixF64 = linalg::ComplexMatrix<f64>;
pub type ComplexMatrixF32 = linalg::ComplexMatrix<f32>;
pub type DensityMatrixF64 = linalg::DensityMatrix<f64>;
pub type DensityMatrixF32 = linalg::DensityMatrix<f32>;
pub type BlochVectorF64 = linalg::BlochVector<f64>;
pub type PauliDistributionF64 = qubit_pauli::PauliDistribution<f64>;
pub type PauliDistributionF32 = qubit_pauli::PauliDistribution<f32>;
pub type TradeoffPointF64 = qubit_pauli::TradeoffPoint<f64>;
pub type MixedUnitarySchemeF64 = general_scheme::MixedUnitaryScheme<f64>;
pub type DominanceReportF64 = general_scheme::DominanceReport<f64>;
pub type ProductSchemeF64 = product_scheme::ProductScheme<f64>;
pub type NormBoundsF64 = product_scheme::NormBounds<f64>;
