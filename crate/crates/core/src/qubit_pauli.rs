//! Single-qubit Pauli encryption schemes and the optimal trade-off between
//! approximation quality and classical entropy.
//!
//! A Pauli scheme applies `I, Z, X, Y` with weights `w ≥ z ≥ x ≥ y`. The
//! worst-encrypted input is `|z+>`, giving deviation `ε = w + z - 1/2`, and
//! the entropy-minimal scheme for a given `ε` falls into one of three regimes
//! separated by `ε = 1/6` and the critical point `ε₀ ≈ 0.287`.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::{BlochVector, ComplexMatrix, DensityMatrix, Pauli};
use crate::scalar::{xlog2x, Real};

const BISECT_MAX_ITER: usize = 200;

/// Probability distribution over `{I, Z, X, Y}` in canonical descending order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliDistribution<T> {
    w: T,
    z: T,
    x: T,
    y: T,
}

impl<T: Real> PauliDistribution<T> {
    /// Weights for `I, Z, X, Y`; must already be descending.
    pub fn new(w: T, z: T, x: T, y: T) -> Result<Self> {
        let tol = T::tol(1e-12);
        if y < T::zero() {
            return Err(Error::InvalidDistribution(format!("negative weight {y}")));
        }
        if w < z || z < x || x < y {
            return Err(Error::InvalidDistribution(format!(
                "weights ({w}, {z}, {x}, {y}) are not in descending order"
            )));
        }
        let sum = w + z + x + y;
        if (sum - T::one()).abs() > tol {
            return Err(Error::InvalidDistribution(format!("weights sum to {sum}, expected 1")));
        }
        Ok(Self { w, z, x, y })
    }

    /// Sorts arbitrary weights descending and assigns them to `I, Z, X, Y`.
    pub fn from_weights(mut weights: [T; 4]) -> Result<Self> {
        if weights.iter().any(|v| v.is_nan()) {
            return Err(Error::InvalidDistribution("NaN weight".into()));
        }
        weights.sort_by(|a, b| b.partial_cmp(a).expect("no NaN"));
        Self::new(weights[0], weights[1], weights[2], weights[3])
    }

    pub fn uniform() -> Self {
        let q = T::lit(0.25);
        Self { w: q, z: q, x: q, y: q }
    }

    pub fn identity() -> Self {
        Self { w: T::one(), z: T::zero(), x: T::zero(), y: T::zero() }
    }

    /// `(w, z, x, y)`.
    pub fn weights(&self) -> [T; 4] {
        [self.w, self.z, self.x, self.y]
    }

    pub fn weight(&self, p: Pauli) -> T {
        match p {
            Pauli::I => self.w,
            Pauli::Z => self.z,
            Pauli::X => self.x,
            Pauli::Y => self.y,
        }
    }

    /// Bloch-component multipliers `(2(w+x)-1, 2(w+y)-1, 2(w+z)-1)`.
    pub fn shrink_factors(&self) -> BlochVector<T> {
        let one = T::one();
        let two = one + one;
        BlochVector::new(two * (self.w + self.x) - one, two * (self.w + self.y) - one, two * (self.w + self.z) - one)
    }

    pub fn entropy(&self) -> T {
        self.weights().into_iter().fold(T::zero(), |acc, p| acc + xlog2x(p))
    }
}

/// `Σ_σ p_σ σ ρ σ` over the four Paulis.
pub fn apply_pauli_channel<T: Real>(rho: &DensityMatrix<T>, d: &PauliDistribution<T>) -> Result<DensityMatrix<T>> {
    if rho.qubits() != 1 {
        return Err(Error::Dimension(format!("expected a single qubit, got {}", rho.qubits())));
    }
    let mut out = ComplexMatrix::zeros(2);
    for p in Pauli::ALL {
        let weight = d.weight(p);
        if weight > T::zero() {
            out = &out + &rho.matrix().conjugate_by(&p.matrix()).scale(weight);
        }
    }
    Ok(DensityMatrix::from_valid(out))
}

/// Worst-case operator-norm deviation `w + z - 1/2` of a Pauli scheme.
pub fn epsilon_of<T: Real>(d: &PauliDistribution<T>) -> T {
    d.w + d.z - T::half()
}

/// Closed-form entropy along one boundary of the feasible set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `(1/4+ε/2, 1/4+ε/2, 1/4+ε/2, 1/4-3ε/2)`, valid for `ε ∈ [0, 1/6]`.
    H1,
    /// `(1/4+3ε/2, 1/4-ε/2, 1/4-ε/2, 1/4-ε/2)`, valid for `ε ∈ [0, 1/2]`.
    H2,
    /// `(2ε, 1/2-ε, 1/2-ε, 0)`, valid for `ε ∈ (0, 1/2)`.
    H3,
}

pub fn entropy_branch<T: Real>(epsilon: T, branch: Branch) -> Result<T> {
    let sixth = T::one() / T::lit(6.0);
    let half = T::half();
    let ok = match branch {
        Branch::H1 => epsilon >= T::zero() && epsilon <= sixth,
        Branch::H2 => epsilon >= T::zero() && epsilon <= half,
        Branch::H3 => epsilon > T::zero() && epsilon < half,
    };
    if !ok {
        return Err(Error::Domain(format!("ε = {epsilon} outside the domain of {branch:?}")));
    }
    let weights = branch_weights(epsilon, branch);
    Ok(weights.into_iter().fold(T::zero(), |acc, p| acc + xlog2x(p)))
}

/// The distribution whose entropy [`entropy_branch`] evaluates.
pub fn branch_distribution<T: Real>(epsilon: T, branch: Branch) -> Result<PauliDistribution<T>> {
    entropy_branch(epsilon, branch)?;
    PauliDistribution::from_weights(branch_weights(epsilon, branch))
}

fn branch_weights<T: Real>(e: T, branch: Branch) -> [T; 4] {
    let q = T::lit(0.25);
    let h = T::half();
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    match branch {
        Branch::H1 => {
            let big = q + e / two;
            [big, big, big, (q - three * e / two).max(T::zero())]
        }
        Branch::H2 => {
            let small = (q - e / two).max(T::zero());
            [q + three * e / two, small, small, small]
        }
        Branch::H3 => {
            let mid = h - e;
            [two * e, mid, mid, T::zero()]
        }
    }
}

/// Which row of the optimal-distribution table applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Regime {
    /// Three equal large weights.
    I,
    /// Three unitaries, the two smaller weights equal.
    II,
    /// Three equal small weights.
    III,
}

impl Regime {
    pub fn branch(self) -> Branch {
        match self {
            Regime::I => Branch::H1,
            Regime::II => Branch::H3,
            Regime::III => Branch::H2,
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::I => "i",
            Regime::II => "ii",
            Regime::III => "iii",
        })
    }
}

/// One point on the optimal ε–entropy curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffPoint<T> {
    pub epsilon: T,
    pub entropy: T,
    pub distribution: PauliDistribution<T>,
    pub regime: Regime,
}

impl<T: Real> TradeoffPoint<T> {
    fn from_distribution(distribution: PauliDistribution<T>, regime: Regime) -> Self {
        Self { epsilon: epsilon_of(&distribution), entropy: distribution.entropy(), distribution, regime }
    }
}

/// The crossing `H₃(ε₀) = H₂(ε₀)` that separates regimes ii and iii.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint<T> {
    pub epsilon0: T,
    pub h0: T,
}

/// Locates `ε₀` by bisection on `H₃ - H₂` over `(1/6, 1/2)`.
///
/// `H₃ - H₂` is concave with a root at `1/2`, so apart from that endpoint it
/// has a single crossing; a coarse scan brackets it.
pub fn critical_point<T: Real>() -> CriticalPoint<T> {
    let sixth = T::one() / T::lit(6.0);
    let half = T::half();
    let gap =
        |e: T| entropy_branch(e, Branch::H3).expect("in domain") - entropy_branch(e, Branch::H2).expect("in domain");
    let steps = 64;
    let span = half - sixth;
    let mut lo = sixth;
    let mut hi = None;
    for i in 1..steps {
        let e = sixth + span * T::from_usize_lossy(i) / T::from_usize_lossy(steps);
        if gap(e) > T::zero() {
            hi = Some(e);
            break;
        }
        lo = e;
    }
    let hi = hi.expect("H3 - H2 changes sign inside (1/6, 1/2)");
    let epsilon0 = bisect(gap, lo, hi, T::tol(1e-12));
    CriticalPoint { epsilon0, h0: entropy_branch(epsilon0, Branch::H2).expect("in domain") }
}

/// Root of a bracketed function; stops once `|f| ≤ tol` or the interval
/// cannot shrink further.
fn bisect<T: Real>(f: impl Fn(T) -> T, mut lo: T, mut hi: T, tol: T) -> T {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo.abs() <= tol {
        return lo;
    }
    if f_hi.abs() <= tol {
        return hi;
    }
    debug_assert!(f_lo.signum() != f_hi.signum(), "bisection interval does not bracket a root");
    let mut mid = (lo + hi) * T::half();
    for _ in 0..BISECT_MAX_ITER {
        mid = (lo + hi) * T::half();
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid.abs() <= tol {
            break;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    mid
}

fn regime_distribution<T: Real>(epsilon: T, regime: Regime) -> PauliDistribution<T> {
    let w = branch_weights(epsilon, regime.branch());
    PauliDistribution::from_weights(w).expect("branch weights form a distribution")
}

/// Entropy-minimal Pauli scheme achieving deviation exactly `ε`.
///
/// At `ε = 1/6` and `ε = ε₀` the adjacent regimes tie in entropy; the lower
/// regime is reported.
pub fn optimal_distribution_for_epsilon<T: Real>(epsilon: T) -> Result<TradeoffPoint<T>> {
    if !(epsilon >= T::zero() && epsilon <= T::half()) {
        return Err(Error::Domain(format!("ε = {epsilon} outside [0, 1/2]")));
    }
    let sixth = T::one() / T::lit(6.0);
    let regime = if epsilon <= sixth {
        Regime::I
    } else if epsilon <= critical_point::<T>().epsilon0 {
        Regime::II
    } else {
        Regime::III
    };
    let d = regime_distribution(epsilon, regime);
    Ok(TradeoffPoint { epsilon, entropy: d.entropy(), distribution: d, regime })
}

static BRANCHES_MONOTONE: OnceLock<()> = OnceLock::new();

// Inverting by bisection needs each branch strictly decreasing on its regime.
fn assert_branches_monotone() {
    BRANCHES_MONOTONE.get_or_init(|| {
        let e0 = critical_point::<f64>().epsilon0;
        for (branch, lo, hi) in [(Branch::H1, 0.0, 1.0 / 6.0), (Branch::H3, 1.0 / 6.0, e0), (Branch::H2, e0, 0.5)] {
            let values: Vec<f64> =
                (0..=32).map(|i| entropy_branch(lo + (hi - lo) * i as f64 / 32.0, branch).unwrap_or(0.0)).collect();
            assert!(values.windows(2).all(|w| w[1] < w[0]), "{branch:?} is not strictly decreasing on [{lo}, {hi}]");
        }
    });
}

/// Pauli scheme with entropy `h` and the smallest achievable deviation.
pub fn optimal_distribution_for_entropy<T: Real>(h: T) -> Result<TradeoffPoint<T>> {
    assert_branches_monotone();
    let two = T::lit(2.0);
    let slack = T::tol(1e-10);
    if !(h >= -slack && h <= two + slack) {
        return Err(Error::Domain(format!("entropy {h} outside [0, 2]")));
    }
    let h = h.max(T::zero()).min(two);
    let log2_3 = T::lit(3.0).log2();
    let crit = critical_point::<T>();
    let tol = T::tol(1e-12);
    let one = T::one();
    let three = T::lit(3.0);

    let (d, regime) = if h >= log2_3 {
        // (z, z, z, 1-3z), entropy decreasing in z on [1/4, 1/3]
        let f = |z: T| three * xlog2x(z) + xlog2x((one - three * z).max(T::zero())) - h;
        let z = bisect(f, T::lit(0.25), one / three, tol);
        (PauliDistribution::from_weights([z, z, z, (one - three * z).max(T::zero())])?, Regime::I)
    } else if h >= crit.h0 {
        // (1-2z, z, z, 0), entropy increasing in z on [1/2-ε₀, 1/3]
        let f = |z: T| xlog2x(one - two * z) + two * xlog2x(z) - h;
        let z = bisect(f, T::half() - crit.epsilon0, one / three, tol);
        (PauliDistribution::from_weights([one - two * z, z, z, T::zero()])?, Regime::II)
    } else {
        // (1-3z, z, z, z), entropy increasing in z on [0, 1/4-ε₀/2]
        let f = |z: T| xlog2x(one - three * z) + three * xlog2x(z) - h;
        let z = bisect(f, T::zero(), T::lit(0.25) - crit.epsilon0 / two, tol);
        (PauliDistribution::from_weights([one - three * z, z, z, z])?, Regime::III)
    };
    Ok(TradeoffPoint::from_distribution(d, regime))
}

/// Result of the exhaustive grid search over Pauli distributions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMinimum<T> {
    pub entropy: T,
    pub distribution: PauliDistribution<T>,
    /// Deviation `w + z - 1/2` of the minimising grid point.
    pub epsilon: T,
}

/// Exhaustive search for the minimum-entropy ordered distribution on a grid.
///
/// Weights are multiples of `1/m` with `m = round(1/grid_step)`. Grid points
/// are admitted when `|w + z - 1/2 - ε| ≤ grid_step`, `w ≥ z ≥ x ≥ y ≥ 0`,
/// and `1/4 + ε'/2 ≥ z ≥ 1/4 - ε'/2`, `1/2 - ε' ≥ z` for the point's own
/// deviation `ε'`. Among admitted points, only the deviation levels closest
/// to `ε` compete; otherwise a neighbouring level with larger `ε'` would
/// undercut the optimum by roughly `|dH/dε| · grid_step`.
pub fn brute_force_min_entropy<T: Real>(epsilon: T, grid_step: T) -> Result<GridMinimum<T>> {
    if !(grid_step >= T::lit(1e-4) && grid_step <= T::lit(0.05)) {
        return Err(Error::Domain(format!("grid step {grid_step} outside [1e-4, 0.05]")));
    }
    if !(epsilon >= T::zero() && epsilon <= T::half()) {
        return Err(Error::Domain(format!("ε = {epsilon} outside [0, 1/2]")));
    }
    let m = (T::one() / grid_step).round().to_usize().expect("finite grid");
    let mf = T::from_usize_lossy(m);
    let step = T::one() / mf;
    let target = (T::half() + epsilon) * mf;

    // deviation levels L = m (w + z) inside the window, nearest first
    let lo = ((T::half() + epsilon - step) * mf).floor().max(T::zero()).to_usize().unwrap_or(0);
    let hi = ((T::half() + epsilon + step) * mf).ceil().to_usize().unwrap_or(m).min(m);
    let mut levels: Vec<(T, usize)> = (lo..=hi)
        .filter(|&l| {
            let eps_l = T::from_usize_lossy(l) / mf - T::half();
            eps_l >= -T::tol(1e-12) && (eps_l - epsilon).abs() <= step + T::tol(1e-12)
        })
        .map(|l| ((T::from_usize_lossy(l) - target).abs(), l))
        .collect();
    levels.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));

    let mut i = 0;
    while i < levels.len() {
        let dist = levels[i].0;
        let mut best: Option<(T, [usize; 4])> = None;
        while i < levels.len() && levels[i].0 <= dist + T::tol(1e-9) {
            if let Some(found) = scan_level(levels[i].1, m) {
                if best.is_none_or(|b| found.0 < b.0) {
                    best = Some(found);
                }
            }
            i += 1;
        }
        if let Some((entropy, [w, z, x, y])) = best {
            let to = |v: usize| T::from_usize_lossy(v) / mf;
            let distribution = PauliDistribution::new(to(w), to(z), to(x), to(y))?;
            return Ok(GridMinimum { entropy, distribution, epsilon: epsilon_of(&distribution) });
        }
    }
    Err(Error::Domain(format!("no admissible grid point near ε = {epsilon}")))
}

/// Minimum entropy over grid points with `w + z = level / m`.
fn scan_level<T: Real>(level: usize, m: usize) -> Option<(T, [usize; 4])> {
    let rest = m - level; // x + y
    let mf = T::from_usize_lossy(m);
    let eps = T::from_usize_lossy(level) / mf - T::half();
    let q = T::lit(0.25);
    let two = T::lit(2.0);
    let mut best: Option<(T, [usize; 4])> = None;
    for z in 0..=level.min(rest) {
        let w = level - z;
        if w < z {
            break;
        }
        let zf = T::from_usize_lossy(z) / mf;
        let slack = T::tol(1e-12);
        if zf > q + eps / two + slack || zf < q - eps / two - slack || zf > T::half() - eps + slack {
            continue;
        }
        for x in rest.div_ceil(2)..=z.min(rest) {
            let y = rest - x;
            let h = [w, z, x, y].iter().fold(T::zero(), |acc, &v| acc + xlog2x(T::from_usize_lossy(v) / mf));
            if best.is_none_or(|b| h < b.0) {
                best = Some((h, [w, z, x, y]));
            }
        }
    }
    best
}

/// Optimal trade-off point for each `ε` in the grid.
pub fn tradeoff_table<T: Real>(epsilon_grid: &[T]) -> Result<Vec<TradeoffPoint<T>>> {
    epsilon_grid.iter().map(|&e| optimal_distribution_for_epsilon(e)).collect()
}
