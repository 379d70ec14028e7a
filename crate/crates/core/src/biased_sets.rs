//! Small-bias multisets of bit strings and the Pauli mixing schemes they
//! induce on n qubits.
//!
//! A `2n`-bit string selects one Pauli per qubit from consecutive bit pairs
//! (`00→I, 01→Z, 10→X, 11→Y`). Encrypting `|z+>^⊗n` with the uniform mixture
//! over such words yields a diagonal state whose entries are the frequencies
//! of each χ-signature (which qubits got X or Y). Padding any small-bias set
//! with zero strings keeps the bias small but concentrates mass on χ = 0,
//! which breaks operator-norm security.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{Pauli, MAX_QUBITS};
use crate::scalar::Real;

/// Largest string length the Walsh–Hadamard bias routine accepts.
pub const MAX_BIAS_BITS: usize = 20;

/// Multiset of `k`-bit strings; the leftmost character is the most
/// significant bit of the stored integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitStringSet {
    k: usize,
    strings: Vec<u32>,
}

impl BitStringSet {
    pub fn new(k: usize, strings: Vec<u32>) -> Result<Self> {
        if k == 0 || k > 32 {
            return Err(Error::Argument(format!("string length {k} outside 1..=32")));
        }
        if strings.is_empty() {
            return Err(Error::Argument("set must contain at least one string".into()));
        }
        if let Some(s) = strings.iter().find(|&&s| k < 32 && s >> k != 0) {
            return Err(Error::Argument(format!("value {s} does not fit in {k} bits")));
        }
        Ok(Self { k, strings })
    }

    /// Every `k`-bit string exactly once.
    pub fn full_cube(k: usize) -> Result<Self> {
        if k > MAX_BIAS_BITS {
            return Err(Error::Resource(format!("2^{k} strings is too many")));
        }
        Self::new(k, (0..(1u32 << k)).collect())
    }

    /// One string per line; blank lines and `#` comments are skipped. The
    /// first string fixes `k`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut k = None;
        let mut strings = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = idx + 1;
            let parse_err = |message: String| Error::Parse { location: format!("line {lineno}"), message };
            let expected = *k.get_or_insert(line.len());
            if line.len() != expected {
                return Err(parse_err(format!("length {} differs from k = {expected}", line.len())));
            }
            if expected > 32 {
                return Err(parse_err(format!("length {expected} exceeds 32 bits")));
            }
            let mut v = 0u32;
            for ch in line.chars() {
                v = (v << 1)
                    | match ch {
                        '0' => 0,
                        '1' => 1,
                        other => return Err(parse_err(format!("unexpected character {other:?}"))),
                    };
            }
            strings.push(v);
        }
        let k = k.ok_or_else(|| Error::Parse { location: "end of input".into(), message: "no bit strings".into() })?;
        Self::new(k, strings)
    }

    pub fn to_text(&self) -> String {
        self.strings.iter().map(|&s| format!("{}\n", format_bits(s, self.k))).collect()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    pub fn strings(&self) -> &[u32] {
        &self.strings
    }

    /// Qubit count `k / 2` for even `k`.
    pub fn qubits(&self) -> Result<usize> {
        if !self.k.is_multiple_of(2) {
            return Err(Error::Argument(format!("odd string length {} does not encode Pauli words", self.k)));
        }
        Ok(self.k / 2)
    }
}

pub fn format_bits(v: u32, k: usize) -> String {
    (0..k).rev().map(|i| if (v >> i) & 1 == 1 { '1' } else { '0' }).collect()
}

#[inline]
fn parity(v: u32) -> bool {
    v.count_ones() & 1 == 1
}

/// `F[T] = Σ_s (-1)^{T·s}` for every mask `T`, via an in-place Walsh–Hadamard transform.
pub fn walsh_spectrum(s: &BitStringSet) -> Result<Vec<i64>> {
    if s.k > MAX_BIAS_BITS {
        return Err(Error::Resource(format!("k = {} exceeds the {MAX_BIAS_BITS}-bit bias limit", s.k)));
    }
    let size = 1usize << s.k;
    let mut f = vec![0i64; size];
    for &v in &s.strings {
        f[v as usize] += 1;
    }
    let mut h = 1;
    while h < size {
        for block in (0..size).step_by(2 * h) {
            for i in block..block + h {
                let (a, b) = (f[i], f[i + h]);
                f[i] = a + b;
                f[i + h] = a - b;
            }
        }
        h *= 2;
    }
    Ok(f)
}

/// `max_{T≠0} |Σ_s (-1)^{T·s}|`, an exact integer.
pub fn max_parity_imbalance(s: &BitStringSet) -> Result<u64> {
    Ok(walsh_spectrum(s)?.iter().skip(1).map(|v| v.unsigned_abs()).max().unwrap_or(0))
}

/// `max_{T≠0} |Pr[T·s = 0] - 1/2|`.
pub fn bias<T: Real>(s: &BitStringSet) -> Result<T> {
    let m = max_parity_imbalance(s)?;
    Ok(T::lit(m as f64) / T::lit(2.0 * s.len() as f64))
}

/// Tensor product of single-qubit Paulis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliWord(pub Vec<Pauli>);

impl PauliWord {
    pub fn letters(&self) -> &[Pauli] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|p| write!(f, "{p}"))
    }
}

fn decode_pair(bits: u32) -> Pauli {
    match bits & 3 {
        0b00 => Pauli::I,
        0b01 => Pauli::Z,
        0b10 => Pauli::X,
        _ => Pauli::Y,
    }
}

/// Decodes a `2n`-character bit string such as `"0110"` into `ZX`.
pub fn pauli_word_of(bits: &str) -> Result<PauliWord> {
    if !bits.len().is_multiple_of(2) {
        return Err(Error::Argument(format!("odd-length string {bits:?}")));
    }
    let set = BitStringSet::parse(bits)?;
    Ok(pauli_word_of_value(set.strings[0], bits.len()))
}

pub fn pauli_word_of_value(v: u32, k: usize) -> PauliWord {
    PauliWord((0..k / 2).map(|j| decode_pair(v >> (k - 2 - 2 * j))).collect())
}

/// `n`-bit pattern, qubit 0 in the most significant position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    pub bits: u32,
    pub len: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_bits(self.bits, self.len))
    }
}

/// Bit `j` is 1 when letter `j` is X or Y.
pub fn chi_signature(w: &PauliWord) -> Signature {
    let bits = w.0.iter().fold(0u32, |acc, p| (acc << 1) | u32::from(p.flips_z()));
    Signature { bits, len: w.len() }
}

/// χ-signature straight from the packed string: the first bit of each pair.
#[inline]
fn chi_of_value(v: u32, n: usize) -> u32 {
    (0..n).fold(0u32, |acc, j| (acc << 1) | ((v >> (2 * n - 1 - 2 * j)) & 1))
}

/// Occurrence count of each χ-signature, indexed by the signature value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChiHistogram {
    pub n: usize,
    pub counts: Vec<usize>,
    pub total: usize,
}

impl ChiHistogram {
    pub fn count(&self, chi: u32) -> usize {
        self.counts[chi as usize]
    }

    /// Number of signatures that occur at least once.
    pub fn occupied(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    fn deviations<T: Real>(&self) -> impl Iterator<Item = T> + '_ {
        let total = T::from_usize_lossy(self.total);
        let uniform = T::one() / T::from_usize_lossy(self.counts.len());
        self.counts.iter().map(move |&c| T::from_usize_lossy(c) / total - uniform)
    }
}

pub fn chi_histogram(s: &BitStringSet) -> Result<ChiHistogram> {
    let n = s.qubits()?;
    if n > MAX_QUBITS {
        return Err(Error::Resource(format!("{n} qubits exceeds the cap of {MAX_QUBITS}")));
    }
    let mut counts = vec![0usize; 1 << n];
    for &v in &s.strings {
        counts[chi_of_value(v, n) as usize] += 1;
    }
    Ok(ChiHistogram { n, counts, total: s.len() })
}

/// `max_χ |count(χ)/N - 2^-n|`, the operator-norm deviation of the encrypted
/// `|z+>^⊗n`.
pub fn diag_state_deviation_inf<T: Real>(s: &BitStringSet) -> Result<T> {
    Ok(chi_histogram(s)?.deviations().fold(T::zero(), |acc, d: T| acc.max(d.abs())))
}

/// 2-norm of the same diagonal deviation.
pub fn two_norm_deviation_diag<T: Real>(s: &BitStringSet) -> Result<T> {
    Ok(chi_histogram(s)?.deviations().fold(T::zero(), |acc, d: T| acc + d * d).sqrt())
}

/// `ceil(δN)` with a small guard against decimal round-off in `δ`.
pub fn padding_count(delta: f64, n: usize) -> usize {
    let x = delta * n as f64;
    (x - 1e-9 * x.max(1.0)).ceil().max(1.0) as usize
}

/// Appends `ceil(δN)` copies of the all-zero string (χ = 0).
///
/// Each parity sum shifts by the number of added strings, so the bias grows
/// by at most `δ'/2` with `δ' = ceil(δN)/N`; in particular by at most `2δ`
/// whenever `δN ≥ 1/3`.
pub fn pad_counterexample(s: &BitStringSet, delta: f64) -> Result<BitStringSet> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::Domain(format!("δ = {delta} outside (0, 1]")));
    }
    s.qubits()?;
    let extra = padding_count(delta, s.len());
    let mut strings = s.strings.clone();
    strings.extend(std::iter::repeat_n(0u32, extra));
    BitStringSet::new(s.k, strings)
}

/// A set meeting the bias target, and how hard it was to find.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub set: BitStringSet,
    pub tries: usize,
    pub bias: f64,
}

fn check_search_args(k: usize, size: usize, target_delta: f64) -> Result<()> {
    if k == 0 || k > MAX_BIAS_BITS {
        return Err(Error::Resource(format!("k = {k} outside 1..={MAX_BIAS_BITS}")));
    }
    if size == 0 {
        return Err(Error::Argument("set size must be positive".into()));
    }
    if !(0.0..=0.5).contains(&target_delta) {
        return Err(Error::Domain(format!("target bias {target_delta} outside [0, 1/2]")));
    }
    Ok(())
}

fn sample_set<R: Rng>(k: usize, size: usize, rng: &mut R) -> BitStringSet {
    let strings = (0..size).map(|_| rng.gen_range(0..(1u32 << k))).collect();
    BitStringSet { k, strings }
}

/// Draws `size` uniform strings per try until the bias is at most `target_delta`.
pub fn random_set_search(
    k: usize,
    size: usize,
    target_delta: f64,
    seed: u64,
    max_tries: usize,
) -> Result<SearchOutcome> {
    check_search_args(k, size, target_delta)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    for tries in 1..=max_tries {
        let set = sample_set(k, size, &mut rng);
        let b = bias::<f64>(&set)?;
        if b <= target_delta {
            return Ok(SearchOutcome { set, tries, bias: b });
        }
        best = best.min(b);
    }
    Err(Error::SearchFailure { tries: max_tries, best_bias: best })
}

/// Like [`random_set_search`], but each sampled set is then improved by up to
/// `max_swaps` single-string replacements before the next try.
///
/// Replacements minimise `Σ_T max(0, |F[T]| - θ)²` over the Walsh spectrum,
/// with `θ` a little below the target imbalance. Only masks already within 2
/// of `θ` can change the penalty, so candidates are scored on that hot set.
pub fn refined_set_search(
    k: usize,
    size: usize,
    target_delta: f64,
    seed: u64,
    max_tries: usize,
    max_swaps: usize,
) -> Result<SearchOutcome> {
    check_search_args(k, size, target_delta)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let limit = (target_delta * 2.0 * size as f64 + 1e-9).floor() as i64;
    let mut best = f64::INFINITY;
    for tries in 1..=max_tries {
        let mut set = sample_set(k, size, &mut rng);
        let mut spectrum = walsh_spectrum(&set)?;
        refine(&mut set, &mut spectrum, limit, max_swaps, &mut rng);
        let b = bias::<f64>(&set)?;
        if b <= target_delta {
            return Ok(SearchOutcome { set, tries, bias: b });
        }
        best = best.min(b);
    }
    Err(Error::SearchFailure { tries: max_tries, best_bias: best })
}

const CANDIDATES_PER_SWAP: usize = 16;

fn max_imbalance(spectrum: &[i64]) -> i64 {
    spectrum.iter().skip(1).map(|v| v.abs()).max().unwrap_or(0)
}

fn refine<R: Rng>(set: &mut BitStringSet, spectrum: &mut [i64], limit: i64, max_swaps: usize, rng: &mut R) {
    let k = set.k;
    let theta = limit - (limit / 8).max(1);
    let penalty = |v: i64| {
        let excess = (v.abs() - theta).max(0);
        excess * excess
    };
    let mut hot: Vec<u32> = Vec::new();
    let rebuild_hot = |spectrum: &[i64], hot: &mut Vec<u32>| {
        hot.clear();
        hot.extend((1..spectrum.len()).filter(|&t| spectrum[t].abs() > theta - 2).map(|t| t as u32));
    };
    rebuild_hot(spectrum, &mut hot);
    let sign = |t: u32, s: u32| -> i64 {
        if parity(t & s) {
            -1
        } else {
            1
        }
    };

    for _ in 0..max_swaps {
        if max_imbalance(spectrum) <= limit {
            return;
        }
        let idx = rng.gen_range(0..set.strings.len());
        let old = set.strings[idx];
        let mut best: Option<(i64, u32)> = None;
        for _ in 0..CANDIDATES_PER_SWAP {
            let cand = rng.gen_range(0..(1u32 << k));
            let delta: i64 = hot
                .iter()
                .map(|&t| {
                    let f = spectrum[t as usize];
                    penalty(f - sign(t, old) + sign(t, cand)) - penalty(f)
                })
                .sum();
            if best.is_none_or(|(d, _)| delta < d) {
                best = Some((delta, cand));
            }
        }
        if let Some((delta, cand)) = best {
            if delta < 0 {
                set.strings[idx] = cand;
                for (t, f) in spectrum.iter_mut().enumerate() {
                    *f += sign(t as u32, cand) - sign(t as u32, old);
                }
                rebuild_hot(spectrum, &mut hot);
            }
        }
    }
}

/// Metrics of a small-bias set before and after zero-string padding.
#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleReport {
    pub n: usize,
    pub k: usize,
    pub delta: f64,
    /// `ceil(δN)/N`, the padding fraction actually used.
    pub effective_delta: f64,
    pub size: usize,
    pub padded_size: usize,
    pub tries: usize,
    pub bias_before: f64,
    pub bias_after: f64,
    pub inf_deviation_before: f64,
    pub inf_deviation_after: f64,
    /// `δ/(1+δ) - 2^-n`.
    pub inf_lower_bound: f64,
    pub two_norm_before: f64,
    pub two_norm_after: f64,
}

/// Searches a set of size `n·2^n` over `2n`-bit strings with bias at most
/// `δ`, pads it with `ceil(δN)` zero strings and measures the damage.
pub fn counterexample_report(n: usize, delta: f64, seed: u64) -> Result<CounterexampleReport> {
    counterexample_report_with(n, delta, seed, 32, 200_000)
}

pub fn counterexample_report_with(
    n: usize,
    delta: f64,
    seed: u64,
    max_tries: usize,
    max_swaps: usize,
) -> Result<CounterexampleReport> {
    if !(2..=8).contains(&n) {
        return Err(Error::Domain(format!("n = {n} outside 2..=8")));
    }
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(Error::Domain(format!("δ = {delta} outside (0, 1/2]")));
    }
    let k = 2 * n;
    let size = n << n;
    let found = refined_set_search(k, size, delta, seed, max_tries, max_swaps)?;
    let padded = pad_counterexample(&found.set, delta)?;
    Ok(CounterexampleReport {
        n,
        k,
        delta,
        effective_delta: (padded.len() - size) as f64 / size as f64,
        size,
        padded_size: padded.len(),
        tries: found.tries,
        bias_before: found.bias,
        bias_after: bias(&padded)?,
        inf_deviation_before: diag_state_deviation_inf(&found.set)?,
        inf_deviation_after: diag_state_deviation_inf(&padded)?,
        inf_lower_bound: delta / (1.0 + delta) - 0.5f64.powi(n as i32),
        two_norm_before: two_norm_deviation_diag(&found.set)?,
        two_norm_after: two_norm_deviation_diag(&padded)?,
    })
}
