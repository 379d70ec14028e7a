use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use qotp_core::biased_sets::{
    bias, chi_histogram, counterexample_report, diag_state_deviation_inf, max_parity_imbalance, pad_counterexample,
    random_set_search, refined_set_search, two_norm_deviation_diag, BitStringSet,
};
use qotp_core::general_scheme::{dominating_pauli, parse_scheme_file, random_scheme_with, MixedUnitaryScheme};
use qotp_core::linalg::SchattenP;
use qotp_core::product_scheme::{sampled_norm_check, uniform_product_bounds, ProductScheme};
use qotp_core::qubit_pauli::{
    branch_distribution, critical_point, optimal_distribution_for_entropy, optimal_distribution_for_epsilon,
    tradeoff_table, Branch, Regime,
};
use qotp_core::{PauliDistributionF64, TradeoffPointF64};

use crate::output::{render, sig, sig_opt, write, Records};
use crate::{Cli, CliError, Command};

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let emit = |text: String| write(&text, cli.out.as_deref());
    match &cli.command {
        Command::Tradeoff { from, to, step } => {
            let rows = tradeoff_rows(*from, *to, *step)?;
            emit(render(Records::Many(&rows), cli.format)?)
        }
        Command::Optimal { epsilon, entropy } => {
            let point = match (epsilon, entropy) {
                (Some(e), None) => optimal_distribution_for_epsilon(*e)?,
                (None, Some(h)) => optimal_distribution_for_entropy(*h)?,
                _ => return Err(CliError::Usage("give exactly one of --epsilon and --entropy".into())),
            };
            emit(render(Records::One(&PointRow::new(&point)), cli.format)?)
        }
        Command::Critical => {
            let c = critical_point::<f64>();
            let row = CriticalRow { epsilon0: sig(c.epsilon0), h0: sig(c.h0) };
            emit(render(Records::One(&row), cli.format)?)
        }
        Command::VerifyDominance { file, random, tolerance } => {
            let schemes = match (file, random) {
                (Some(path), None) => parse_scheme_file(&read(path)?)?,
                (None, Some(count)) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                    (0..*count)
                        .map(|_| {
                            let n = rng.gen_range(2..=6);
                            random_scheme_with(n, &mut rng)
                        })
                        .collect::<Result<Vec<_>, _>>()?
                }
                _ => return Err(CliError::Usage("give either a scheme file or --random".into())),
            };
            let rows: Vec<DominanceRow> =
                schemes.iter().enumerate().map(|(i, t)| DominanceRow::new(i, t, *tolerance)).collect();
            emit(render(Records::Many(&rows), cli.format)?)?;
            let failed = rows.iter().filter(|r| !r.holds).count();
            if failed > 0 {
                return Err(CliError::Verification(format!("{failed} of {} schemes violate dominance", rows.len())));
            }
            Ok(())
        }
        Command::Nqubit { epsilon, n, check_samples } => {
            let row = nqubit_row(*epsilon, *n as usize, *check_samples, cli.max_qubits as usize, cli.seed)?;
            emit(render(Records::One(&row), cli.format)?)
        }
        Command::Bias { file, k, size, delta, max_tries, refine, pad, save_set } => {
            let (set, tries) = match (file, k, size, delta) {
                (Some(path), None, _, _) => (BitStringSet::parse(&read(path)?)?, None),
                (None, Some(k), Some(size), Some(delta)) => {
                    let found = if *refine {
                        refined_set_search(*k, *size, *delta, cli.seed, *max_tries, 200_000)?
                    } else {
                        random_set_search(*k, *size, *delta, cli.seed, *max_tries)?
                    };
                    (found.set, Some(found.tries))
                }
                _ => return Err(CliError::Usage("give a set file or all of --k, --size and --delta".into())),
            };
            if let Some(path) = save_set {
                fs::write(path, set.to_text()).map_err(|e| CliError::Io(path.display().to_string(), e))?;
            }
            let row = bias_row(&set, tries, *pad)?;
            emit(render(Records::One(&row), cli.format)?)
        }
        Command::Counterexample { n, delta } => {
            let r = counterexample_report(*n, *delta, cli.seed)?;
            let row = CounterexampleRow {
                n: r.n,
                k: r.k,
                delta: sig(r.delta),
                effective_delta: sig(r.effective_delta),
                size: r.size,
                padded_size: r.padded_size,
                tries: r.tries,
                bias_before: sig(r.bias_before),
                bias_after: sig(r.bias_after),
                inf_deviation_before: sig(r.inf_deviation_before),
                inf_deviation_after: sig(r.inf_deviation_after),
                inf_lower_bound: sig(r.inf_lower_bound),
                two_norm_before: sig(r.two_norm_before),
                two_norm_after: sig(r.two_norm_after),
            };
            emit(render(Records::One(&row), cli.format)?)
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))
}

#[derive(Debug, Serialize)]
struct PointRow {
    epsilon: f64,
    entropy: f64,
    regime: String,
    w: f64,
    z: f64,
    x: f64,
    y: f64,
}

impl PointRow {
    fn new(p: &TradeoffPointF64) -> Self {
        Self::from_parts(p.epsilon, p.entropy, p.regime.to_string(), &p.distribution)
    }

    fn from_parts(epsilon: f64, entropy: f64, regime: String, d: &PauliDistributionF64) -> Self {
        let [w, z, x, y] = d.weights().map(sig);
        Self { epsilon: sig(epsilon), entropy: sig(entropy), regime, w, z, x, y }
    }
}

#[derive(Debug, Serialize)]
struct TradeoffRow {
    kind: &'static str,
    epsilon: f64,
    entropy: f64,
    regime: String,
    w: f64,
    z: f64,
    x: f64,
    y: f64,
}

impl TradeoffRow {
    fn new(kind: &'static str, p: PointRow) -> Self {
        let PointRow { epsilon, entropy, regime, w, z, x, y } = p;
        Self { kind, epsilon, entropy, regime, w, z, x, y }
    }
}

const GRID_LIMIT: usize = 100_000;

fn tradeoff_rows(from: f64, to: f64, step: f64) -> Result<Vec<TradeoffRow>, CliError> {
    let in_range = |v: f64| (0.0..=0.5).contains(&v);
    if !(in_range(from) && in_range(to) && from <= to) {
        return Err(CliError::Usage(format!("grid [{from}, {to}] must lie within [0, 0.5]")));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(CliError::Usage(format!("step {step} must be positive")));
    }
    let intervals = ((to - from) / step + 1e-9).floor();
    if intervals >= GRID_LIMIT as f64 {
        return Err(CliError::Usage(format!("grid has more than {GRID_LIMIT} points")));
    }
    let grid: Vec<f64> = (0..=intervals as usize).map(|i| (from + i as f64 * step).min(to)).collect();
    let mut rows: Vec<TradeoffRow> =
        tradeoff_table(&grid)?.iter().map(|p| TradeoffRow::new("grid", PointRow::new(p))).collect();

    let c = critical_point::<f64>();
    if (from..=to).contains(&c.epsilon0) {
        let at = rows.partition_point(|r| r.epsilon <= c.epsilon0);
        let markers = [(Regime::II, Branch::H3), (Regime::III, Branch::H2)].map(|(regime, branch)| {
            let d = branch_distribution(c.epsilon0, branch).expect("ε₀ lies inside both branches");
            TradeoffRow::new("critical", PointRow::from_parts(c.epsilon0, d.entropy(), regime.to_string(), &d))
        });
        rows.splice(at..at, markers);
    }
    Ok(rows)
}

#[derive(Debug, Serialize)]
struct CriticalRow {
    epsilon0: f64,
    h0: f64,
}

#[derive(Debug, Serialize)]
struct DominanceRow {
    index: usize,
    unitaries: usize,
    case: u8,
    tail_fallback: bool,
    epsilon_general: f64,
    epsilon_pauli: f64,
    entropy_general: f64,
    entropy_pauli: f64,
    w: f64,
    z: f64,
    x: f64,
    y: f64,
    holds: bool,
}

impl DominanceRow {
    fn new(index: usize, t: &MixedUnitaryScheme<f64>, tolerance: f64) -> Self {
        let r = dominating_pauli(t);
        let [w, z, x, y] = r.pauli.weights().map(sig);
        Self {
            index,
            unitaries: t.len(),
            case: r.case.id(),
            tail_fallback: r.tail_fallback,
            epsilon_general: sig(r.epsilon_general),
            epsilon_pauli: sig(r.epsilon_pauli),
            entropy_general: sig(r.entropy_general),
            entropy_pauli: sig(r.entropy_pauli),
            w,
            z,
            x,
            y,
            holds: r.holds(tolerance),
        }
    }
}

/// Norms are absolute; `inf_times_d` and `two_times_sqrt_d` rescale them to
/// the `ε/d` and `ε/√d` conventions.
#[derive(Debug, Serialize)]
struct NqubitRow {
    n: usize,
    epsilon: f64,
    inf_norm: f64,
    two_norm: f64,
    leading_inf: f64,
    leading_two: f64,
    inf_times_d: f64,
    two_times_sqrt_d: f64,
    samples: Option<usize>,
    sampled_inf: Option<f64>,
    sampled_two: Option<f64>,
}

fn nqubit_row(epsilon: f64, n: usize, samples: Option<usize>, cap: usize, seed: u64) -> Result<NqubitRow, CliError> {
    let b = uniform_product_bounds(epsilon, n)?;
    let log_d = n as f64 * std::f64::consts::LN_2;
    let (mut sampled_inf, mut sampled_two) = (None, None);
    if let Some(m) = samples {
        if n > cap {
            return Err(
                qotp_core::Error::Resource(format!("sampling needs n ≤ {cap} (QOTP_MAX_QUBITS), got {n}")).into()
            );
        }
        let d = optimal_distribution_for_epsilon(epsilon / 2.0)?.distribution;
        let r = ProductScheme::repeated(d, n)?;
        sampled_inf = Some(sampled_norm_check(&r, SchattenP::Inf, m, seed)?.max_observed);
        sampled_two = Some(sampled_norm_check(&r, SchattenP::Two, m, seed)?.max_observed);
    }
    Ok(NqubitRow {
        n,
        epsilon: sig(epsilon),
        inf_norm: sig(b.exact.inf_norm),
        two_norm: sig(b.exact.two_norm),
        leading_inf: sig(b.leading_inf),
        leading_two: sig(b.leading_two),
        inf_times_d: sig(b.exact.inf_norm * log_d.exp()),
        two_times_sqrt_d: sig(b.exact.two_norm * (log_d / 2.0).exp()),
        samples,
        sampled_inf: sig_opt(sampled_inf),
        sampled_two: sig_opt(sampled_two),
    })
}

#[derive(Debug, Default, Serialize)]
struct BiasRow {
    k: usize,
    size: usize,
    tries: Option<usize>,
    max_imbalance: u64,
    bias: f64,
    qubits: Option<usize>,
    chi_occupied: Option<usize>,
    chi_zero_fraction: Option<f64>,
    inf_deviation: Option<f64>,
    two_norm: Option<f64>,
    pad_delta: Option<f64>,
    effective_delta: Option<f64>,
    padded_size: Option<usize>,
    padded_bias: Option<f64>,
    padded_inf_deviation: Option<f64>,
    padded_two_norm: Option<f64>,
}

fn bias_row(set: &BitStringSet, tries: Option<usize>, pad: Option<f64>) -> Result<BiasRow, CliError> {
    let mut row = BiasRow {
        k: set.k(),
        size: set.len(),
        tries,
        max_imbalance: max_parity_imbalance(set)?,
        bias: sig(bias(set)?),
        ..Default::default()
    };
    if let Ok(n) = set.qubits() {
        let h = chi_histogram(set)?;
        row.qubits = Some(n);
        row.chi_occupied = Some(h.occupied());
        row.chi_zero_fraction = Some(sig(h.count(0) as f64 / h.total as f64));
        row.inf_deviation = Some(sig(diag_state_deviation_inf(set)?));
        row.two_norm = Some(sig(two_norm_deviation_diag(set)?));
    }
    if let Some(delta) = pad {
        let padded = pad_counterexample(set, delta)?;
        row.pad_delta = Some(sig(delta));
        row.effective_delta = Some(sig((padded.len() - set.len()) as f64 / set.len() as f64));
        row.padded_size = Some(padded.len());
        row.padded_bias = Some(sig(bias(&padded)?));
        row.padded_inf_deviation = Some(sig(diag_state_deviation_inf(&padded)?));
        row.padded_two_norm = Some(sig(two_norm_deviation_diag(&padded)?));
    }
    Ok(row)
}

#[derive(Debug, Serialize)]
struct CounterexampleRow {
    n: usize,
    k: usize,
    delta: f64,
    effective_delta: f64,
    size: usize,
    padded_size: usize,
    tries: usize,
    bias_before: f64,
    bias_after: f64,
    inf_deviation_before: f64,
    inf_deviation_after: f64,
    inf_lower_bound: f64,
    two_norm_before: f64,
    two_norm_after: f64,
}
