//! Independent n-qubit schemes `P₁ ⊗ … ⊗ P_n` built from single-qubit Pauli
//! schemes, with exact worst-case 2- and ∞-norm deviations.
//!
//! Each factor is summarised by its largest Bloch shrink factor
//! `s = 2(w + z) - 1`: the worst single-qubit output has eigenvalues
//! `(1 ± s)/2`. Because maximal output p-norms of unital product channels are
//! multiplicative, the worst n-qubit input is the product of per-qubit worst
//! states, and
//!
//! ```text
//! ‖R(ρ) - I/2^n‖_∞ ≤ Π (1 + s_k)/2 - 2^-n
//! ‖R(ρ) - I/2^n‖_2 ≤ sqrt(Π (1 + s_k²)/2 - 2^-n)
//! ```
//!
//! with equality on `|z+>^⊗n`.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    random_density_with, schatten_norm, ComplexMatrix, DensityMatrix, SchattenP, StateMode, MAX_QUBITS,
};
use crate::qubit_pauli::{epsilon_of, PauliDistribution};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct ProductScheme<T> {
    per_qubit: Vec<PauliDistribution<T>>,
}

impl<T: Real> ProductScheme<T> {
    pub fn new(per_qubit: Vec<PauliDistribution<T>>) -> Result<Self> {
        if per_qubit.is_empty() {
            return Err(Error::Argument("product scheme needs at least one qubit".into()));
        }
        if per_qubit.len() > MAX_QUBITS {
            return Err(Error::Resource(format!("{} qubits exceeds the cap of {MAX_QUBITS}", per_qubit.len())));
        }
        Ok(Self { per_qubit })
    }

    /// `n` copies of the same single-qubit scheme.
    pub fn repeated(d: PauliDistribution<T>, n: usize) -> Result<Self> {
        Self::new(vec![d; n])
    }

    pub fn qubits(&self) -> usize {
        self.per_qubit.len()
    }

    pub fn per_qubit(&self) -> &[PauliDistribution<T>] {
        &self.per_qubit
    }
}

/// Largest Bloch shrink factor `2(w+z) - 1`, i.e. twice [`epsilon_of`].
pub fn qubit_epsilon<T: Real>(d: &PauliDistribution<T>) -> T {
    epsilon_of(d) + epsilon_of(d)
}

/// Applies the product channel by one conjugation sweep per qubit.
pub fn apply_product_scheme<T: Real>(rho: &DensityMatrix<T>, r: &ProductScheme<T>) -> Result<DensityMatrix<T>> {
    let n = r.qubits();
    if rho.qubits() != n {
        return Err(Error::Dimension(format!("state has {} qubits, scheme has {n}", rho.qubits())));
    }
    let dim = rho.dim();
    let mut cur = rho.matrix().clone();
    for (k, d) in r.per_qubit().iter().enumerate() {
        let mask = 1usize << (n - 1 - k);
        let [w, z, x, y] = d.weights();
        let mut next = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            let si = (i & mask) == 0;
            for j in 0..dim {
                let same = si == ((j & mask) == 0);
                // Z and Y conjugation contribute the sign s_i s_j
                let (diag, flip) = if same { (w + z, x + y) } else { (w - z, x - y) };
                let v: Complex<T> = cur[(i, j)] * diag + cur[(i ^ mask, j ^ mask)] * flip;
                next[(i, j)] = v;
            }
        }
        cur = next;
    }
    Ok(DensityMatrix::from_valid(cur))
}

/// Worst-case deviations of a product scheme from the maximally mixed state.
#[derive(Debug, Clone, PartialEq)]
pub struct NormBounds<T> {
    pub two_norm: T,
    pub inf_norm: T,
    pub n: usize,
    /// Per-qubit shrink factors `s_k` (eigenvalues `(1 ± s_k)/2`).
    pub epsilons: Vec<T>,
}

impl<T: Real> NormBounds<T> {
    pub fn norm(&self, p: SchattenP) -> T {
        match p {
            SchattenP::Two => self.two_norm,
            SchattenP::Inf => self.inf_norm,
        }
    }

    fn from_epsilons(epsilons: Vec<T>) -> Self {
        let n = epsilons.len();
        let half = T::half();
        let floor = half.powi(n as i32);
        let inf = epsilons.iter().fold(T::one(), |acc, &e| acc * (T::one() + e) * half) - floor;
        let two_sq = epsilons.iter().fold(T::one(), |acc, &e| acc * (T::one() + e * e) * half) - floor;
        Self { two_norm: two_sq.max(T::zero()).sqrt(), inf_norm: inf.max(T::zero()), n, epsilons }
    }
}

pub fn exact_worst_case<T: Real>(r: &ProductScheme<T>) -> NormBounds<T> {
    NormBounds::from_epsilons(r.per_qubit().iter().map(qubit_epsilon).collect())
}

/// Exact bounds for `n` identical factors together with their leading-order
/// forms `nε/2^n` and `√n ε/2^{n/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformBounds<T> {
    pub exact: NormBounds<T>,
    pub leading_inf: T,
    pub leading_two: T,
}

/// `ε` is the per-qubit shrink factor, so `ε ∈ [0, 1]`.
pub fn uniform_product_bounds<T: Real>(epsilon: T, n: usize) -> Result<UniformBounds<T>> {
    if !(epsilon >= T::zero() && epsilon <= T::one()) {
        return Err(Error::Domain(format!("ε = {epsilon} outside [0, 1]")));
    }
    if n == 0 {
        return Err(Error::Argument("n must be at least 1".into()));
    }
    let nf = T::from_usize_lossy(n);
    let two = T::lit(2.0);
    Ok(UniformBounds {
        exact: NormBounds::from_epsilons(vec![epsilon; n]),
        leading_inf: nf * epsilon / two.powi(n as i32),
        leading_two: nf.sqrt() * epsilon / two.powf(nf * T::half()),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledCheck<T> {
    pub max_observed: T,
    pub exact: T,
    pub samples: usize,
}

impl<T: Real> SampledCheck<T> {
    pub fn within(&self, tol: T) -> bool {
        self.max_observed <= self.exact + tol
    }
}

/// Largest observed deviation over Haar-random pure states, with the
/// all-`|z+>` certificate state always included as the first sample.
pub fn sampled_norm_check<T: Real>(
    r: &ProductScheme<T>,
    p: SchattenP,
    samples: usize,
    seed: u64,
) -> Result<SampledCheck<T>> {
    let n = r.qubits();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let deviation = |rho: &DensityMatrix<T>| -> Result<T> {
        schatten_norm(&apply_product_scheme(rho, r)?.deviation_from_mixed(), p)
    };
    let mut max_observed = deviation(&DensityMatrix::all_z_plus(n))?;
    for _ in 1..samples {
        let rho = random_density_with(n, StateMode::PureHaar, &mut rng)?;
        max_observed = max_observed.max(deviation(&rho)?);
    }
    Ok(SampledCheck { max_observed, exact: exact_worst_case(r).norm(p), samples: samples.max(1) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random_density, Pauli};
    use crate::qubit_pauli::apply_pauli_channel;
    use approx::assert_abs_diff_eq;

    /// Expands the channel over all 4^n Pauli words.
    fn apply_by_words(rho: &DensityMatrix<f64>, r: &ProductScheme<f64>) -> ComplexMatrix<f64> {
        let n = r.qubits();
        let mut out = ComplexMatrix::zeros(rho.dim());
        for word in 0..4usize.pow(n as u32) {
            let mut weight = 1.0;
            let mut u = ComplexMatrix::identity(1);
            for k in 0..n {
                let p = Pauli::ALL[(word >> (2 * (n - 1 - k))) & 3];
                weight *= r.per_qubit()[k].weight(p);
                u = u.kron(&p.matrix());
            }
            if weight > 0.0 {
                out = &out + &rho.matrix().conjugate_by(&u).scale(weight);
            }
        }
        out
    }

    fn pd(w: f64, z: f64, x: f64, y: f64) -> PauliDistribution<f64> {
        PauliDistribution::new(w, z, x, y).unwrap()
    }

    #[test]
    fn sweep_matches_word_expansion() {
        let r =
            ProductScheme::new(vec![pd(0.4, 0.3, 0.2, 0.1), pd(0.7, 0.1, 0.1, 0.1), pd(0.5, 0.5, 0.0, 0.0)]).unwrap();
        for seed in 0..5 {
            let rho = random_density(3, StateMode::Mixed, seed).unwrap();
            let a = apply_product_scheme(&rho, &r).unwrap();
            assert!(a.matrix().max_abs_diff(&apply_by_words(&rho, &r)) < 1e-14);
        }
    }

    #[test]
    fn apply_examples() {
        let rho = random_density::<f64>(3, StateMode::PureHaar, 1).unwrap();
        let uniform = ProductScheme::repeated(PauliDistribution::uniform(), 3).unwrap();
        let out = apply_product_scheme(&rho, &uniform).unwrap();
        assert!(out.matrix().max_abs_diff(DensityMatrix::maximally_mixed(3).matrix()) < 1e-15);
        let id = ProductScheme::repeated(PauliDistribution::identity(), 3).unwrap();
        assert!(apply_product_scheme(&rho, &id).unwrap().matrix().max_abs_diff(rho.matrix()) < 1e-15);

        let d1 = pd(0.4, 0.3, 0.2, 0.1);
        let d2 = pd(0.6, 0.2, 0.1, 0.1);
        let a = random_density::<f64>(1, StateMode::PureHaar, 2).unwrap();
        let b = random_density::<f64>(1, StateMode::Mixed, 3).unwrap();
        let out = apply_product_scheme(&a.tensor(&b), &ProductScheme::new(vec![d1, d2]).unwrap()).unwrap();
        let expect = apply_pauli_channel(&a, &d1).unwrap().tensor(&apply_pauli_channel(&b, &d2).unwrap());
        assert!(out.matrix().max_abs_diff(expect.matrix()) < 1e-15);

        assert!(matches!(apply_product_scheme(&a, &uniform), Err(Error::Dimension(_))));
    }

    #[test]
    fn exact_examples() {
        let b = exact_worst_case(&ProductScheme::repeated(PauliDistribution::<f64>::uniform(), 4).unwrap());
        assert_eq!((b.inf_norm, b.two_norm), (0.0, 0.0));

        // shrink factor 0.2 on one qubit
        let d = PauliDistribution::from_weights([0.3, 0.3, 0.2, 0.2]).unwrap();
        let b = exact_worst_case(&ProductScheme::repeated(d, 1).unwrap());
        assert_abs_diff_eq!(b.inf_norm, 0.1, epsilon = 1e-15);

        let d = PauliDistribution::from_weights([0.275, 0.275, 0.225, 0.225]).unwrap();
        let b = exact_worst_case(&ProductScheme::repeated(d, 2).unwrap());
        assert_abs_diff_eq!(b.inf_norm, 0.0525, epsilon = 1e-15);
        assert_abs_diff_eq!(b.two_norm, 0.070_887_234_393_789_13, epsilon = 1e-15);
    }

    #[test]
    fn exact_matches_dense_certificate() {
        let r = ProductScheme::new(vec![pd(0.4, 0.3, 0.2, 0.1), pd(0.7, 0.1, 0.1, 0.1), pd(0.35, 0.25, 0.25, 0.15)])
            .unwrap();
        let out = apply_product_scheme(&DensityMatrix::all_z_plus(3), &r).unwrap().deviation_from_mixed();
        let b = exact_worst_case(&r);
        assert_abs_diff_eq!(schatten_norm(&out, SchattenP::Inf).unwrap(), b.inf_norm, epsilon = 1e-14);
        assert_abs_diff_eq!(schatten_norm(&out, SchattenP::Two).unwrap(), b.two_norm, epsilon = 1e-14);
    }

    #[test]
    fn uniform_bounds_examples() {
        let b = uniform_product_bounds(0.0, 5).unwrap();
        assert_eq!((b.exact.inf_norm, b.exact.two_norm), (0.0, 0.0));
        let b = uniform_product_bounds(0.1, 2).unwrap();
        assert_abs_diff_eq!(b.exact.inf_norm, 0.0525, epsilon = 1e-15);
        let b = uniform_product_bounds(0.01, 4).unwrap();
        assert!(f64::abs(b.exact.inf_norm - b.leading_inf) <= 0.05 * b.leading_inf);
        assert!(uniform_product_bounds(1.5, 2).is_err());
    }

    #[test]
    fn sampled_examples() {
        let r = ProductScheme::repeated(PauliDistribution::<f64>::uniform(), 2).unwrap();
        let c = sampled_norm_check(&r, SchattenP::Inf, 50, 1).unwrap();
        assert!(c.max_observed < 1e-14);

        let d = PauliDistribution::from_weights([0.4, 0.4, 0.1, 0.1]).unwrap();
        let r = ProductScheme::repeated(d, 2).unwrap();
        for p in [SchattenP::Inf, SchattenP::Two] {
            let c = sampled_norm_check(&r, p, 500, 7).unwrap();
            assert!(c.within(1e-9));
            assert_abs_diff_eq!(c.max_observed, c.exact, epsilon = 1e-12);
        }
    }
}
