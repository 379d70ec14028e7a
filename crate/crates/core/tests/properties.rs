use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qotp_core::biased_sets::{
    bias, chi_histogram, diag_state_deviation_inf, max_parity_imbalance, pad_counterexample, pauli_word_of_value,
    random_set_search, refined_set_search, two_norm_deviation_diag, walsh_spectrum, BitStringSet,
};
use qotp_core::general_scheme::{
    apply_scheme, bloch_matrix, dominating_pauli, majorization_check, probe_state_epsilons, random_scheme,
    worst_case_epsilon, SchemeCase,
};
use qotp_core::linalg::{
    bloch_to_density, density_to_bloch, hermitian_eigenvalues, random_density, random_unit_vector, schatten_norm,
    tensor, BlochVector, ComplexMatrix, DensityMatrix, SchattenP, StateMode,
};
use qotp_core::product_scheme::{apply_product_scheme, exact_worst_case, sampled_norm_check, ProductScheme};
use qotp_core::qubit_pauli::{
    apply_pauli_channel, brute_force_min_entropy, entropy_branch, epsilon_of, optimal_distribution_for_entropy,
    optimal_distribution_for_epsilon, Branch, PauliDistribution,
};
use qotp_core::{ComplexMatrixF64, PauliDistributionF64};

fn random_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrixF64 {
    let mut a = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        a[(i, i)] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        for j in i + 1..dim {
            let v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            a[(i, j)] = v;
            a[(j, i)] = v.conj();
        }
    }
    a
}

fn distribution(raw: [f64; 4]) -> PauliDistributionF64 {
    let total: f64 = raw.iter().sum();
    let mut w = raw.map(|v| v / total);
    w[0] = 1.0 - w[1] - w[2] - w[3];
    PauliDistribution::from_weights(w).unwrap()
}

fn weights() -> impl Strategy<Value = [f64; 4]> {
    [0.01f64..1.0, 0.01f64..1.0, 0.01f64..1.0, 0.01f64..1.0]
}

// linalg

proptest! {
    #[test]
    fn schatten_norms_are_ordered(seed in any::<u64>(), dim_log in 0usize..4) {
        let dim = 1 << dim_log;
        let a = random_hermitian(dim, &mut ChaCha8Rng::seed_from_u64(seed));
        let inf = schatten_norm(&a, SchattenP::Inf).unwrap();
        let two = schatten_norm(&a, SchattenP::Two).unwrap();
        prop_assert!(inf <= two + 1e-12);
        prop_assert!(two <= (dim as f64).sqrt() * inf + 1e-12);
    }

    #[test]
    fn bloch_round_trip(x in -1.0f64..1.0, y in -1.0f64..1.0, z in -1.0f64..1.0, scale in 0.0f64..=1.0) {
        let r = BlochVector::new(x, y, z);
        let norm = r.norm().max(1.0);
        let r = BlochVector::new(x * scale / norm, y * scale / norm, z * scale / norm);
        let back = density_to_bloch(&bloch_to_density(r).unwrap()).unwrap();
        for (a, b) in back.to_array().iter().zip(r.to_array()) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn traceless_qubit_eigenvalues_are_symmetric(a in -2.0f64..2.0, re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let m = ComplexMatrix::from_rows([
            [Complex64::new(a, 0.0), Complex64::new(re, im)],
            [Complex64::new(re, -im), Complex64::new(-a, 0.0)],
        ]);
        let e = hermitian_eigenvalues(&m).unwrap();
        prop_assert!((e[0] + e[1]).abs() <= 1e-12);
        prop_assert!((e[0] - (a * a + re * re + im * im).sqrt()).abs() <= 1e-12);
    }

    #[test]
    fn tensor_is_associative_and_multiplies_spectra(seed in any::<u64>(), da in 0usize..3, db in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_hermitian(1 << da, &mut rng);
        let b = random_hermitian(1 << db, &mut rng);
        let c = random_hermitian(2, &mut rng);
        let left = tensor(&tensor(&a, &b), &c);
        let right = tensor(&a, &tensor(&b, &c));
        prop_assert!(left.max_abs_diff(&right) <= 1e-12);

        let ea = hermitian_eigenvalues(&a).unwrap();
        let eb = hermitian_eigenvalues(&b).unwrap();
        let mut products: Vec<f64> = ea.iter().flat_map(|x| eb.iter().map(move |y| x * y)).collect();
        products.sort_by(|p, q| q.partial_cmp(p).unwrap());
        let direct = hermitian_eigenvalues(&tensor(&a, &b)).unwrap();
        for (p, d) in products.iter().zip(&direct) {
            prop_assert!((p - d).abs() <= 1e-10);
        }
    }
}

// qubit_pauli

fn pure_state_deviation(d: &PauliDistributionF64, r: [f64; 3]) -> f64 {
    let rho = bloch_to_density(BlochVector::from_array(r)).unwrap();
    schatten_norm(&apply_pauli_channel(&rho, d).unwrap().deviation_from_mixed(), SchattenP::Inf).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pauli_worst_case_is_z_plus(raw in weights(), seed in any::<u64>()) {
        let d = distribution(raw);
        let eps = epsilon_of(&d);
        prop_assert!((pure_state_deviation(&d, [0.0, 0.0, 1.0]) - eps).abs() <= 1e-9);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..2000 {
            prop_assert!(pure_state_deviation(&d, random_unit_vector(&mut rng)) <= eps + 1e-9);
        }
    }

    #[test]
    fn epsilon_ignores_weight_assignment(raw in weights(), perm in Just([0usize, 1, 2, 3]).prop_shuffle()) {
        let shuffled = perm.map(|i| raw[i]);
        prop_assert!((epsilon_of(&distribution(raw)) - epsilon_of(&distribution(shuffled))).abs() <= 1e-15);
    }

    #[test]
    fn small_epsilon_expansion(e in 1e-6f64..=0.05) {
        let h1 = entropy_branch(e, Branch::H1).unwrap();
        prop_assert!((h1 - (2.0 - 6.0 / std::f64::consts::LN_2 * e * e)).abs() <= 40.0 * e * e * e);
    }

    #[test]
    fn optimum_is_never_beaten_by_valid_distributions(raw in weights()) {
        let d = distribution(raw);
        let eps = epsilon_of(&d);
        let opt = optimal_distribution_for_epsilon(eps).unwrap();
        prop_assert!(opt.entropy <= d.entropy() + 1e-9);
    }
}

fn epsilon_grid() -> impl Iterator<Item = f64> {
    (0..=50).map(|i| i as f64 / 100.0)
}

#[test]
fn closed_form_beats_grid_search() {
    for e in epsilon_grid() {
        let exact = optimal_distribution_for_epsilon(e).unwrap().entropy;
        let grid: f64 = brute_force_min_entropy(e, 0.0025).unwrap().entropy;
        assert!(exact <= grid + 5e-3, "ε = {e}: {exact} vs {grid}");
    }
}

#[test]
fn entropy_inversion_round_trips() {
    let boundaries = [1.0 / 6.0, 0.2870789380504524, 0.0, 0.5];
    for e in epsilon_grid().filter(|e| boundaries.iter().all(|b| (e - b).abs() > 0.005)) {
        let h = optimal_distribution_for_epsilon(e).unwrap().entropy;
        let back = optimal_distribution_for_entropy(h).unwrap().epsilon;
        assert!((back - e).abs() <= 1e-8, "ε = {e}: recovered {back}");
    }
}

// general_scheme

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pauli_schemes_dominate(seed in any::<u64>(), n in 2usize..=6) {
        let t = random_scheme::<f64>(n, seed).unwrap();
        let r = dominating_pauli(&t);
        prop_assert!(r.epsilon_pauli <= r.epsilon_general + 1e-9);
        prop_assert!(r.entropy_pauli <= r.entropy_general + 1e-9);
        if r.case == SchemeCase::One {
            prop_assert!(r.entropy_general >= 2.0 - 1e-9);
        }
    }

    #[test]
    fn probes_bound_worst_case(seed in any::<u64>(), n in 1usize..=6) {
        let t = random_scheme::<f64>(n, seed).unwrap();
        let probes = probe_state_epsilons(&t).max();
        let worst = worst_case_epsilon(&t);
        prop_assert!(probes <= worst + 1e-12);
        let r = dominating_pauli(&t);
        if r.case == SchemeCase::Three {
            prop_assert!(probes >= r.epsilon_pauli - 1e-9);
        }
    }

    #[test]
    fn choi_spectrum_majorizes_weights(seed in any::<u64>(), n in 1usize..=8) {
        let m = majorization_check(&random_scheme::<f64>(n, seed).unwrap());
        prop_assert!(m.majorizes);
        prop_assert!(m.entropy_drop >= -1e-9);
    }

    #[test]
    fn bloch_matrix_matches_state_action(seed in any::<u64>(), n in 1usize..=5) {
        let t = random_scheme::<f64>(n, seed).unwrap();
        let m = bloch_matrix(&t);
        let r = BlochVector::from_array(random_unit_vector(&mut ChaCha8Rng::seed_from_u64(seed ^ 1)));
        let direct = density_to_bloch(&apply_scheme(&bloch_to_density(r).unwrap(), &t).unwrap()).unwrap();
        for (a, b) in m.apply(r).to_array().iter().zip(direct.to_array()) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }
}

#[test]
fn worst_case_epsilon_agrees_with_sphere_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for seed in 0..20 {
        let t = random_scheme::<f64>(2 + seed as usize % 4, seed).unwrap();
        let m = bloch_matrix(&t);
        let sampled = (0..10_000)
            .map(|_| m.apply(BlochVector::from_array(random_unit_vector(&mut rng))).norm() / 2.0)
            .fold(0.0, f64::max);
        let exact = worst_case_epsilon(&t);
        assert!(sampled <= exact + 1e-12 && exact - sampled <= 1e-4, "seed {seed}: {sampled} vs {exact}");
    }
}

// product_scheme

fn optimal_for_shrink(s: f64) -> PauliDistributionF64 {
    optimal_distribution_for_epsilon(s / 2.0).unwrap().distribution
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dense_output_matches_exact_bounds(raws in prop::collection::vec(weights(), 1..=5)) {
        let r = ProductScheme::new(raws.into_iter().map(distribution).collect()).unwrap();
        let out = apply_product_scheme(&DensityMatrix::all_z_plus(r.qubits()), &r).unwrap().deviation_from_mixed();
        let b = exact_worst_case(&r);
        prop_assert!((schatten_norm(&out, SchattenP::Inf).unwrap() - b.inf_norm).abs() <= 1e-10);
        prop_assert!((schatten_norm(&out, SchattenP::Two).unwrap() - b.two_norm).abs() <= 1e-10);
    }

    #[test]
    fn bounds_grow_with_each_qubit_epsilon(
        others in prop::collection::vec(0.0f64..=1.0, 0..5),
        lo in 0.0f64..=1.0,
        hi in 0.0f64..=1.0,
    ) {
        let (lo, hi) = (lo.min(hi), lo.max(hi));
        let build = |s: f64| {
            let mut per = vec![optimal_for_shrink(s)];
            per.extend(others.iter().map(|&o| optimal_for_shrink(o)));
            exact_worst_case(&ProductScheme::new(per).unwrap())
        };
        let (a, b) = (build(lo), build(hi));
        prop_assert!(a.inf_norm <= b.inf_norm + 1e-15);
        prop_assert!(a.two_norm <= b.two_norm + 1e-15);
    }

    #[test]
    fn entangled_states_never_beat_the_certificate(raws in prop::collection::vec(weights(), 2..=3), seed in any::<u64>()) {
        let r = ProductScheme::new(raws.into_iter().map(distribution).collect()).unwrap();
        for p in [SchattenP::Inf, SchattenP::Two] {
            prop_assert!(sampled_norm_check(&r, p, 200, seed).unwrap().within(1e-9));
        }
    }

    #[test]
    fn entropy_cost_of_small_epsilon(e in 1e-6f64..=0.05, n in 1usize..=64) {
        let nf = n as f64;
        let h1 = entropy_branch(e, Branch::H1).unwrap();
        prop_assert!(nf * (2.0 - h1) <= 6.0 / std::f64::consts::LN_2 * nf * e * e * 1.5);
    }
}

#[test]
fn mixed_states_stay_below_the_certificate() {
    let r = ProductScheme::repeated(optimal_for_shrink(0.3), 3).unwrap();
    let bound = exact_worst_case(&r);
    for seed in 0..200 {
        let rho = random_density::<f64>(3, StateMode::Mixed, seed).unwrap();
        let dev = apply_product_scheme(&rho, &r).unwrap().deviation_from_mixed();
        assert!(schatten_norm(&dev, SchattenP::Inf).unwrap() <= bound.inf_norm + 1e-9);
    }
}

// biased_sets

fn random_set(seed: u64, k: usize, size: usize) -> BitStringSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    BitStringSet::new(k, (0..size).map(|_| rng.gen_range(0..(1u32 << k))).collect()).unwrap()
}

fn naive_max_imbalance(s: &BitStringSet) -> u64 {
    (1..(1u32 << s.k()))
        .map(|t| s.strings().iter().map(|&v| if (v & t).count_ones() % 2 == 0 { 1i64 } else { -1 }).sum::<i64>())
        .map(i64::unsigned_abs)
        .max()
        .unwrap_or(0)
}

fn dense_encrypted_z_plus(s: &BitStringSet) -> ComplexMatrixF64 {
    let n = s.qubits().unwrap();
    let rho = DensityMatrix::<f64>::all_z_plus(n);
    let mut acc = ComplexMatrix::zeros(1 << n);
    for &v in s.strings() {
        let word = pauli_word_of_value(v, s.k());
        let u = word.letters().iter().skip(1).fold(word.letters()[0].matrix(), |m, p| tensor(&m, &p.matrix()));
        acc = &acc + &rho.matrix().conjugate_by(&u);
    }
    DensityMatrix::new(acc.scale(1.0 / s.len() as f64)).unwrap().deviation_from_mixed()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn walsh_bias_matches_enumeration(seed in any::<u64>(), k in 1usize..=12, size in 1usize..=200) {
        let s = random_set(seed, k, size);
        prop_assert_eq!(max_parity_imbalance(&s).unwrap(), naive_max_imbalance(&s));
        prop_assert_eq!(walsh_spectrum(&s).unwrap()[0], size as i64);
    }

    #[test]
    fn diagonal_deviation_matches_dense(seed in any::<u64>(), n in 1usize..=4, size in 1usize..=40) {
        let s = random_set(seed, 2 * n, size);
        let dense = schatten_norm(&dense_encrypted_z_plus(&s), SchattenP::Inf).unwrap();
        prop_assert!((diag_state_deviation_inf::<f64>(&s).unwrap() - dense).abs() <= 1e-12);
        let dense_two = schatten_norm(&dense_encrypted_z_plus(&s), SchattenP::Two).unwrap();
        prop_assert!((two_norm_deviation_diag::<f64>(&s).unwrap() - dense_two).abs() <= 1e-12);
    }

    #[test]
    fn padding_raises_bias_by_at_most_two_delta(seed in any::<u64>(), n in 1usize..=5, delta in 0.01f64..=0.5) {
        let size = (n << n).max(8);
        prop_assume!(delta * size as f64 >= 1.0);
        let s = random_set(seed, 2 * n, size);
        let padded = pad_counterexample(&s, delta).unwrap();
        let before: f64 = bias(&s).unwrap();
        let after: f64 = bias(&padded).unwrap();
        prop_assert!(after <= before + 2.0 * delta + 1e-12);
        let effective = (padded.len() - s.len()) as f64 / s.len() as f64;
        prop_assert!(after <= before + effective / 2.0 + 1e-12);
    }

    #[test]
    fn only_the_chi_partition_matters(seed in any::<u64>(), n in 1usize..=6, size in 1usize..=100) {
        let s = random_set(seed, 2 * n, size);
        // toggling the second bit of each pair swaps I↔Z and X↔Y
        let second_bits = (0..n).fold(0u32, |m, j| m | (1 << (2 * j)));
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5a5a);
        let swapped: Vec<u32> = s.strings().iter().map(|&v| v ^ (second_bits & rng.gen::<u32>())).collect();
        let t = BitStringSet::new(2 * n, swapped).unwrap();
        prop_assert_eq!(chi_histogram(&s).unwrap(), chi_histogram(&t).unwrap());
        prop_assert_eq!(diag_state_deviation_inf::<f64>(&s).unwrap(), diag_state_deviation_inf::<f64>(&t).unwrap());
    }

    #[test]
    fn set_files_round_trip(seed in any::<u64>(), k in 1usize..=20, size in 1usize..=30) {
        let s = random_set(seed, k, size);
        prop_assert_eq!(BitStringSet::parse(&s.to_text()).unwrap(), s);
    }
}

fn verified_sets(n: usize, seeds: std::ops::Range<u64>) -> impl Iterator<Item = (BitStringSet, f64)> {
    seeds.map(move |seed| {
        let found = random_set_search(2 * n, n << n, 0.25, seed, 50).unwrap();
        assert!(found.set.len() >= 1 << n && found.bias <= 0.25);
        (found.set, found.bias)
    })
}

#[test]
fn two_norm_matches_chi_fourier_mass() {
    // ‖p - u‖₂² = 2^-n Σ_{T ≠ 0 on χ bits} F[T]² / N²
    for n in 1..=5usize {
        for seed in 0..20 {
            let s = random_set(seed, 2 * n, 3 + seed as usize * 7);
            let spectrum = walsh_spectrum(&s).unwrap();
            let chi_masks = (1..(1u32 << n)).map(|t| (0..n).fold(0u32, |m, j| m | (((t >> j) & 1) << (2 * j + 1))));
            let mass: f64 = chi_masks.map(|m| (spectrum[m as usize] as f64).powi(2)).sum();
            let expected = (mass / 2f64.powi(n as i32)).sqrt() / s.len() as f64;
            assert!((two_norm_deviation_diag::<f64>(&s).unwrap() - expected).abs() <= 1e-12);
        }
    }
}

#[test]
fn two_norm_is_bounded_by_twice_the_bias() {
    for n in 2..=6usize {
        let factor = 2.0 * (1.0 - 0.5f64.powi(n as i32)).sqrt();
        for (set, b) in verified_sets(n, 0..50) {
            assert!(two_norm_deviation_diag::<f64>(&set).unwrap() <= factor * b + 1e-12);
        }
    }
}

#[test]
fn two_norm_stays_below_target_at_four_qubits() {
    for (set, _) in verified_sets(4, 0..200) {
        assert!(two_norm_deviation_diag::<f64>(&set).unwrap() <= 0.25);
    }
}

#[test]
fn two_norm_stays_below_bias_from_five_qubits() {
    for n in 5..=6usize {
        for (set, b) in verified_sets(n, 0..100) {
            assert!(two_norm_deviation_diag::<f64>(&set).unwrap() <= b + 1e-9, "n = {n}");
        }
    }
}

#[test]
#[ignore = "false for n <= 4: the ratio two-norm / bias reaches 2·sqrt(1 - 2^-n) on seeded sets"]
fn two_norm_stays_below_bias_on_verified_sets() {
    for n in 2..=6usize {
        for (set, b) in verified_sets(n, 0..10) {
            let two: f64 = two_norm_deviation_diag(&set).unwrap();
            assert!(two <= b + 1e-9, "n = {n}: {two} > {b}");
        }
    }
}

#[test]
fn padded_sets_break_operator_norm_security() {
    for n in [4usize, 6] {
        let delta = 8.0 / (1u64 << n) as f64;
        for seed in 0..5 {
            let found = refined_set_search(2 * n, n << n, delta, seed, 8, 100_000).unwrap();
            let padded = pad_counterexample(&found.set, delta).unwrap();
            let lower = delta / (1.0 + delta) - 0.5f64.powi(n as i32);
            assert!(lower > 0.0);
            assert!(diag_state_deviation_inf::<f64>(&padded).unwrap() >= lower);
            assert!(two_norm_deviation_diag::<f64>(&padded).unwrap() <= 3.0 * delta);
        }
    }
}
