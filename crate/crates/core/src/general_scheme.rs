//! General single-qubit mixed-unitary schemes `ρ ↦ Σ_k w_k U_k ρ U_k†`.
//!
//! Provides the exact worst-case deviation through the 3×3 Bloch matrix, the
//! three-way case split that yields a dominating Pauli scheme, probe-state
//! deviations, and the Choi-state majorization check.

use std::fmt;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    bloch_of_operator, bloch_to_density, hermitian_eigenvalues, random_unit_vector, schatten_norm, shannon_entropy,
    unitary_from_axis_angle, BlochVector, ComplexMatrix, DensityMatrix, Pauli, SchattenP,
};
use crate::qubit_pauli::{epsilon_of, PauliDistribution};
use crate::scalar::Real;

/// Unitary `cos φ I + i sin φ (n.σ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisAngle<T> {
    pub phi: T,
    pub axis: [T; 3],
}

impl<T: Real> AxisAngle<T> {
    pub fn new(phi: T, axis: [T; 3]) -> Self {
        Self { phi, axis }
    }

    pub fn identity() -> Self {
        Self { phi: T::zero(), axis: [T::zero(), T::zero(), T::one()] }
    }

    /// The Pauli `σ` up to a global phase (`i σ`).
    pub fn pauli(p: Pauli) -> Self {
        let (o, l) = (T::zero(), T::one());
        let axis = match p {
            Pauli::I => return Self::identity(),
            Pauli::X => [l, o, o],
            Pauli::Y => [o, l, o],
            Pauli::Z => [o, o, l],
        };
        Self { phi: T::FRAC_PI_2(), axis }
    }

    pub fn unitary(&self) -> Result<ComplexMatrix<T>> {
        unitary_from_axis_angle(self.phi, self.axis)
    }
}

/// Weighted set of single-qubit unitaries, weights descending and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedUnitaryScheme<T> {
    weights: Vec<T>,
    unitaries: Vec<AxisAngle<T>>,
    matrices: Vec<ComplexMatrix<T>>,
}

impl<T: Real> MixedUnitaryScheme<T> {
    /// Validates and sorts the pairs by descending weight.
    pub fn new(weights: Vec<T>, unitaries: Vec<AxisAngle<T>>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDistribution("weights: at least one weight is required".into()));
        }
        if weights.len() != unitaries.len() {
            return Err(Error::Argument(format!(
                "unitaries: {} entries for {} weights",
                unitaries.len(),
                weights.len()
            )));
        }
        for (i, w) in weights.iter().enumerate() {
            if w.is_nan() || *w <= T::zero() {
                return Err(Error::InvalidDistribution(format!("weights[{i}]: {w} is not positive")));
            }
        }
        let sum = weights.iter().fold(T::zero(), |a, &b| a + b);
        if (sum - T::one()).abs() > T::tol(1e-12) {
            return Err(Error::InvalidDistribution(format!("weights: sum is {sum}, expected 1")));
        }
        let mut matrices = Vec::with_capacity(unitaries.len());
        for (i, u) in unitaries.iter().enumerate() {
            if !u.phi.is_finite() {
                return Err(Error::Argument(format!("unitaries[{i}].phi: not finite")));
            }
            let m = u.unitary().map_err(|e| Error::Argument(format!("unitaries[{i}].axis: {e}")))?;
            matrices.push(m);
        }
        let mut order: Vec<usize> = (0..weights.len()).collect();
        order.sort_by(|&a, &b| weights[b].partial_cmp(&weights[a]).expect("finite weights"));
        Ok(Self {
            weights: order.iter().map(|&i| weights[i]).collect(),
            unitaries: order.iter().map(|&i| unitaries[i]).collect(),
            matrices: order.iter().map(|&i| matrices[i].clone()).collect(),
        })
    }

    /// The Pauli scheme as a mixed-unitary scheme; zero weights are dropped.
    pub fn from_pauli(d: &PauliDistribution<T>) -> Self {
        let (weights, unitaries): (Vec<_>, Vec<_>) = [Pauli::I, Pauli::Z, Pauli::X, Pauli::Y]
            .into_iter()
            .filter(|&p| d.weight(p) > T::zero())
            .map(|p| (d.weight(p), AxisAngle::pauli(p)))
            .unzip();
        Self::new(weights, unitaries).expect("Pauli distribution is a valid scheme")
    }

    pub fn identity() -> Self {
        Self::new(vec![T::one()], vec![AxisAngle::identity()]).expect("valid")
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn unitaries(&self) -> &[AxisAngle<T>] {
        &self.unitaries
    }

    pub fn entropy(&self) -> T {
        shannon_entropy(&self.weights).expect("validated weights")
    }

    /// `Σ_k w_k U_k A U_k†` for an arbitrary 2×2 operator.
    fn apply_operator(&self, a: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        self.weights
            .iter()
            .zip(&self.matrices)
            .fold(ComplexMatrix::zeros(2), |acc, (&w, u)| &acc + &a.conjugate_by(u).scale(w))
    }
}

pub fn apply_scheme<T: Real>(rho: &DensityMatrix<T>, t: &MixedUnitaryScheme<T>) -> Result<DensityMatrix<T>> {
    if rho.qubits() != 1 {
        return Err(Error::Dimension(format!("expected a single qubit, got {}", rho.qubits())));
    }
    Ok(DensityMatrix::from_valid(t.apply_operator(rho.matrix())))
}

/// Linear action `r ↦ M r` of a unital qubit channel on Bloch vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochMatrix<T> {
    pub m: [[T; 3]; 3],
}

impl<T: Real> BlochMatrix<T> {
    pub fn apply(&self, r: BlochVector<T>) -> BlochVector<T> {
        let v = r.to_array();
        let row = |i: usize| (0..3).fold(T::zero(), |acc, j| acc + self.m[i][j] * v[j]);
        BlochVector::new(row(0), row(1), row(2))
    }

    /// Singular values, descending.
    pub fn singular_values(&self) -> [T; 3] {
        let mut gram = ComplexMatrix::zeros(3);
        for i in 0..3 {
            for j in 0..3 {
                let v = (0..3).fold(T::zero(), |acc, k| acc + self.m[k][i] * self.m[k][j]);
                gram[(i, j)] = Complex::new(v, T::zero());
            }
        }
        let eig = hermitian_eigenvalues(&gram).expect("Gram matrix is symmetric");
        [0, 1, 2].map(|i| eig[i].max(T::zero()).sqrt())
    }
}

/// `M_ij = tr(σ_i E(σ_j)) / 2`.
pub fn bloch_matrix<T: Real>(t: &MixedUnitaryScheme<T>) -> BlochMatrix<T> {
    let mut m = [[T::zero(); 3]; 3];
    for (j, p) in [Pauli::X, Pauli::Y, Pauli::Z].into_iter().enumerate() {
        let image = bloch_of_operator(&t.apply_operator(&p.matrix()));
        for (i, v) in image.to_array().into_iter().enumerate() {
            m[i][j] = v * T::half();
        }
    }
    BlochMatrix { m }
}

/// `max_ρ ‖E(ρ) - I/2‖_∞`, i.e. half the largest singular value of the Bloch matrix.
pub fn worst_case_epsilon<T: Real>(t: &MixedUnitaryScheme<T>) -> T {
    bloch_matrix(t).singular_values()[0] * T::half()
}

/// Case split used to build a dominating Pauli scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum SchemeCase {
    /// `w₁ + w₂ ≤ 1/2`.
    One,
    /// `w₁ + w₂ > 1/2` and `Σ_{k≥3} w_k ≤ 2 w₂`.
    Two,
    /// `w₁ + w₂ > 1/2` and `Σ_{k≥3} w_k > 2 w₂`.
    Three,
}

impl SchemeCase {
    pub fn id(self) -> u8 {
        match self {
            SchemeCase::One => 1,
            SchemeCase::Two => 2,
            SchemeCase::Three => 3,
        }
    }
}

impl fmt::Display for SchemeCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

fn top_two_and_tail<T: Real>(t: &MixedUnitaryScheme<T>) -> (T, T, T) {
    let w = t.weights();
    let w1 = w[0];
    let w2 = w.get(1).copied().unwrap_or(T::zero());
    let tail = w.iter().skip(2).fold(T::zero(), |a, &b| a + b);
    (w1, w2, tail)
}

/// Boundary ties go to the lower case.
pub fn classify_case<T: Real>(t: &MixedUnitaryScheme<T>) -> SchemeCase {
    let (w1, w2, tail) = top_two_and_tail(t);
    if w1 + w2 <= T::half() {
        SchemeCase::One
    } else if tail <= w2 + w2 {
        SchemeCase::Two
    } else {
        SchemeCase::Three
    }
}

/// Comparison of a general scheme with the Pauli scheme built to dominate it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominanceReport<T> {
    pub case: SchemeCase,
    pub pauli: PauliDistribution<T>,
    pub epsilon_general: T,
    pub epsilon_pauli: T,
    pub entropy_general: T,
    pub entropy_pauli: T,
    /// Case 2 with a tail lighter than `w₂`: the Pauli weights become
    /// `(w₁, w₂, tail, 0)` instead of `(w₁, w₂, w₂, tail - w₂)`.
    pub tail_fallback: bool,
}

impl<T: Real> DominanceReport<T> {
    /// Both dominance inequalities, plus `H ≥ 2` for case 1.
    pub fn holds(&self, tol: T) -> bool {
        let two = T::lit(2.0);
        self.epsilon_pauli <= self.epsilon_general + tol
            && self.entropy_pauli <= self.entropy_general + tol
            && (self.case != SchemeCase::One || self.entropy_general >= two - tol)
    }
}

pub fn dominating_pauli<T: Real>(t: &MixedUnitaryScheme<T>) -> DominanceReport<T> {
    let case = classify_case(t);
    let (w1, w2, tail) = top_two_and_tail(t);
    let mut tail_fallback = false;
    let pauli = match case {
        SchemeCase::One => PauliDistribution::uniform(),
        SchemeCase::Two => {
            let third = w2.min(tail);
            tail_fallback = tail < w2;
            let fourth = (tail - third).max(T::zero());
            canonical(w2, third, fourth)
        }
        SchemeCase::Three => {
            let s = (T::one() - w1) / T::lit(3.0);
            canonical(s, s, s)
        }
    };
    DominanceReport {
        case,
        pauli,
        epsilon_general: worst_case_epsilon(t),
        epsilon_pauli: epsilon_of(&pauli),
        entropy_general: t.entropy(),
        entropy_pauli: pauli.entropy(),
        tail_fallback,
    }
}

// The identity weight is recomputed so the four sum to one exactly.
fn canonical<T: Real>(z: T, x: T, y: T) -> PauliDistribution<T> {
    let w = T::one() - z - x - y;
    PauliDistribution::from_weights([w, z, x, y]).expect("dominating weights form a distribution")
}

/// Operator-norm deviations of the encrypted `|x+>`, `|y+>`, `|z+>` states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeEpsilons<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> ProbeEpsilons<T> {
    pub fn max(&self) -> T {
        self.x.max(self.y).max(self.z)
    }
}

pub fn probe_state_epsilons<T: Real>(t: &MixedUnitaryScheme<T>) -> ProbeEpsilons<T> {
    let (o, l) = (T::zero(), T::one());
    let probe = |r: [T; 3]| {
        let rho = bloch_to_density(BlochVector::from_array(r)).expect("unit Bloch vector");
        let out = apply_scheme(&rho, t).expect("single qubit");
        schatten_norm(&out.deviation_from_mixed(), SchattenP::Inf).expect("Hermitian output")
    };
    ProbeEpsilons { x: probe([l, o, o]), y: probe([o, l, o]), z: probe([o, o, l]) }
}

/// Spectrum of `Σ_k w_k (U_k ⊗ I)|ψ+><ψ+|(U_k ⊗ I)†`, descending.
pub fn choi_weights<T: Real>(t: &MixedUnitaryScheme<T>) -> [T; 4] {
    let inv_sqrt2 = T::FRAC_1_SQRT_2();
    let mut choi = ComplexMatrix::zeros(4);
    for (&w, u) in t.weights.iter().zip(&t.matrices) {
        // (U ⊗ I)|ψ+> has amplitude U_ab / √2 at |ab>
        let psi: Vec<_> = u.as_slice().iter().map(|z| z * inv_sqrt2).collect();
        choi = &choi + &ComplexMatrix::outer(&psi).scale(w);
    }
    let eig = hermitian_eigenvalues(&choi).expect("Choi state is Hermitian");
    [0, 1, 2, 3].map(|i| eig[i].max(T::zero()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MajorizationReport<T> {
    pub majorizes: bool,
    /// `H(weights) - H(choi_weights)`.
    pub entropy_drop: T,
    pub choi_weights: [T; 4],
}

/// Checks that the Choi spectrum majorizes the scheme weights, padding the
/// shorter vector with zeros.
pub fn majorization_check<T: Real>(t: &MixedUnitaryScheme<T>) -> MajorizationReport<T> {
    let choi = choi_weights(t);
    let len = t.len().max(4);
    let tol = T::tol(1e-10);
    let mut acc_choi = T::zero();
    let mut acc_w = T::zero();
    let mut majorizes = true;
    for i in 0..len {
        acc_choi = acc_choi + choi.get(i).copied().unwrap_or(T::zero());
        acc_w = acc_w + t.weights.get(i).copied().unwrap_or(T::zero());
        if acc_choi + tol < acc_w {
            majorizes = false;
        }
    }
    let choi_entropy = choi.iter().fold(T::zero(), |acc, &p| acc + crate::scalar::xlog2x(p));
    MajorizationReport { majorizes, entropy_drop: t.entropy() - choi_entropy, choi_weights: choi }
}

/// Flat-simplex weights, uniform axes and angles `φ ∈ [0, π]`.
pub fn random_scheme<T: Real>(n_unitaries: usize, seed: u64) -> Result<MixedUnitaryScheme<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_scheme_with(n_unitaries, &mut rng)
}

pub fn random_scheme_with<T: Real, R: Rng + ?Sized>(n_unitaries: usize, rng: &mut R) -> Result<MixedUnitaryScheme<T>> {
    if !(1..=16).contains(&n_unitaries) {
        return Err(Error::Argument(format!("unitary count {n_unitaries} outside 1..=16")));
    }
    let raw: Vec<f64> = (0..n_unitaries).map(|_| rng.sample::<f64, _>(Exp1).max(f64::MIN_POSITIVE)).collect();
    let total: f64 = raw.iter().sum();
    let mut weights: Vec<T> = raw.iter().map(|v| T::lit(v / total)).collect();
    // absorb rounding so the sum check holds at any precision
    let rest = weights[1..].iter().fold(T::zero(), |a, &b| a + b);
    weights[0] = T::one() - rest;
    let unitaries = (0..n_unitaries)
        .map(|_| {
            let axis = random_unit_vector(rng).map(T::lit);
            let phi = T::lit(rng.gen_range(0.0..=std::f64::consts::PI));
            AxisAngle::new(phi, axis)
        })
        .collect();
    MixedUnitaryScheme::new(weights, unitaries)
}

/// On-disk form of a single unitary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitaryRecord {
    pub phi: f64,
    pub axis: [f64; 3],
}

/// On-disk form of a scheme: `{"weights": [...], "unitaries": [{"phi": .., "axis": [..]}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeRecord {
    pub weights: Vec<f64>,
    pub unitaries: Vec<UnitaryRecord>,
}

impl SchemeRecord {
    pub fn to_scheme(&self) -> Result<MixedUnitaryScheme<f64>> {
        MixedUnitaryScheme::new(
            self.weights.clone(),
            self.unitaries.iter().map(|u| AxisAngle::new(u.phi, u.axis)).collect(),
        )
    }
}

impl From<&MixedUnitaryScheme<f64>> for SchemeRecord {
    fn from(t: &MixedUnitaryScheme<f64>) -> Self {
        Self {
            weights: t.weights.clone(),
            unitaries: t.unitaries.iter().map(|u| UnitaryRecord { phi: u.phi, axis: u.axis }).collect(),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SchemeFile {
    One(SchemeRecord),
    Many(Vec<SchemeRecord>),
}

/// Parses a JSON scheme file holding one record or an array of records.
pub fn parse_scheme_file(text: &str) -> Result<Vec<MixedUnitaryScheme<f64>>> {
    // untagged enums swallow positions; try each shape for a precise error
    let records = match serde_json::from_str::<SchemeFile>(text) {
        Ok(SchemeFile::One(r)) => vec![r],
        Ok(SchemeFile::Many(rs)) => rs,
        Err(_) => {
            let trimmed = text.trim_start();
            let err = if trimmed.starts_with('[') {
                serde_json::from_str::<Vec<SchemeRecord>>(text).err()
            } else {
                serde_json::from_str::<SchemeRecord>(text).err()
            };
            let err = err.expect("one of the shapes failed");
            return Err(Error::Parse {
                location: format!("line {} column {}", err.line(), err.column()),
                message: err.to_string(),
            });
        }
    };
    records
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.to_scheme().map_err(|e| Error::Parse {
                location: format!("scheme {i}"),
                message: match e {
                    Error::InvalidDistribution(m) | Error::Argument(m) => m,
                    other => other.to_string(),
                },
            })
        })
        .collect()
}
