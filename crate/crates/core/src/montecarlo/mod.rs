//! Emission-by-emission coincidence experiments.
//!
//! Emissions are split into fixed-size chunks. Each chunk draws its outcome
//! counts from its own ChaCha8 stream, keyed by the master seed, the setting
//! pair and the chunk index, and chunk counters are merged by addition. The
//! counters of a run therefore depend only on the plan, never on how many
//! worker threads processed the chunks or in which order.

mod counters;
mod estimate;

pub use counters::{cell_name, counters_csv, parse_counters_csv, CoincidenceCounters, CELL_ORDER};
pub use estimate::{
    bootstrap_std_error, estimate_rates, evaluate_measurable_from_counts,
    evaluate_measurable_symmetric_from_counts, multinomial_delta_variance, EstimatedReport,
    RateErrors, BOOTSTRAP_RESAMPLES,
};

use crate::error::{Error, Result};
use crate::inequalities::{SettingPair, SettingsQuad};
use crate::lhv::{DeterministicAssignment, FourAxisModel, ASSIGNMENT_COUNT};
use crate::outcome::Outcome;
pub use crate::predict::Source;
use crate::qm::EventDistribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::ops::Range;

/// Emissions per chunk. Part of the seeding contract: changing it changes
/// every sampled counter.
pub const CHUNK_EMISSIONS: u64 = 1 << 20;

/// Stream used by [`sample_pair_events`] when called outside a run.
const STANDALONE_STREAM: u64 = 0xFF;

/// Independent generator for `(seed, pair, chunk)`.
pub fn chunk_rng(seed: u64, pair_stream: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((pair_stream << 40) ^ chunk);
    rng
}

/// Draws multinomial counts for `n` trials over `probs` by sequential
/// conditional binomials. `probs` must be nonnegative with positive sum.
pub(crate) fn sample_multinomial<R: Rng + ?Sized>(
    rng: &mut R,
    n: u64,
    probs: &[f64],
    out: &mut [u64],
) {
    debug_assert_eq!(probs.len(), out.len());
    let mut remaining_mass: f64 = probs.iter().sum();
    let mut remaining = n;
    let last = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
    for (k, (&p, slot)) in probs.iter().zip(out.iter_mut()).enumerate() {
        if remaining == 0 || p <= 0.0 {
            *slot = 0;
        } else if k == last {
            *slot = remaining;
        } else {
            let q = (p / remaining_mass).clamp(0.0, 1.0);
            let x = Binomial::new(remaining, q)
                .expect("probability clamped to [0, 1]")
                .sample(rng);
            *slot = x;
            remaining -= x;
        }
        remaining_mass -= p;
        if remaining_mass < 0.0 {
            remaining_mass = 0.0;
        }
    }
}

/// Number of chunks a run of `n` emissions per setting pair is split into.
pub fn chunk_count(n: u64) -> u64 {
    n.div_ceil(CHUNK_EMISSIONS)
}

fn chunk_sizes(n: u64, chunks: Range<u64>) -> impl ParallelIterator<Item = (u64, u64)> {
    let end = chunks.end.min(chunk_count(n));
    (chunks.start.min(end)..end).into_par_iter().map(move |c| {
        let start = c * CHUNK_EMISSIONS;
        (c, CHUNK_EMISSIONS.min(n - start))
    })
}

fn sample_distribution(
    dist: &EventDistribution,
    n: u64,
    chunks: Range<u64>,
    seed: u64,
    stream: u64,
) -> CoincidenceCounters {
    let probs: Vec<f64> = dist
        .probabilities()
        .cells()
        .iter()
        .flatten()
        .copied()
        .collect();
    chunk_sizes(n, chunks)
        .map(|(chunk, size)| {
            let mut rng = chunk_rng(seed, stream, chunk);
            let mut counts = [0u64; 9];
            sample_multinomial(&mut rng, size, &probs, &mut counts);
            let mut cells = [[0u64; 3]; 3];
            for (k, c) in counts.into_iter().enumerate() {
                cells[k / 3][k % 3] = c;
            }
            CoincidenceCounters::new(cells)
        })
        .reduce(CoincidenceCounters::default, |a, b| a + b)
}

fn sample_local_model(
    model: &FourAxisModel,
    pair: SettingPair,
    n: u64,
    chunks: Range<u64>,
    seed: u64,
    stream: u64,
) -> CoincidenceCounters {
    let (first, second) = pair.settings();
    let assignments: Vec<DeterministicAssignment> = crate::lhv::enumerate_assignments();
    chunk_sizes(n, chunks)
        .map(|(chunk, size)| {
            let mut rng = chunk_rng(seed, stream, chunk);
            let mut counts = [0u64; ASSIGNMENT_COUNT];
            sample_multinomial(&mut rng, size, model.weights(), &mut counts);
            let mut out = CoincidenceCounters::default();
            for (asg, &c) in assignments.iter().zip(counts.iter()) {
                if c > 0 {
                    out.add_to(asg.first(first), asg.second(second), c);
                }
            }
            out
        })
        .reduce(CoincidenceCounters::default, |a, b| a + b)
}

/// Samples `n` emissions from a per-emission outcome distribution.
pub fn sample_pair_events(
    dist: &EventDistribution,
    n: u64,
    seed: u64,
) -> Result<CoincidenceCounters> {
    check_emissions(n)?;
    Ok(sample_distribution(
        dist,
        n,
        0..chunk_count(n),
        seed,
        STANDALONE_STREAM,
    ))
}

fn check_emissions(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "pairs per setting",
            value: 0.0,
            reason: "must be at least 1",
        });
    }
    Ok(())
}

/// One coincidence experiment: `pairs_per_setting` emissions at each of the
/// four setting pairs of `quad`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunPlan {
    pub quad: SettingsQuad,
    pub pairs_per_setting: u64,
    pub seed: u64,
    pub source: Source,
}

impl RunPlan {
    pub fn validate(&self) -> Result<()> {
        check_emissions(self.pairs_per_setting)
    }
}

pub type RunCounters = BTreeMap<SettingPair, CoincidenceCounters>;

/// Runs the plan on the current rayon pool.
pub fn run_experiment(plan: &RunPlan) -> Result<RunCounters> {
    run_partition(plan, 0..chunk_count(plan.pairs_per_setting))
}

/// Counters of the chunks in `chunks` only, for every setting pair. Chunk
/// indices past the end of the run are ignored. Merging the partitions of
/// `0..chunk_count(n)` reproduces [`run_experiment`] exactly.
pub fn run_partition(plan: &RunPlan, chunks: Range<u64>) -> Result<RunCounters> {
    plan.validate()?;
    let mut runs = BTreeMap::new();
    for pair in SettingPair::ALL {
        let stream = pair.index() as u64;
        let counters = match &plan.source {
            Source::Lhv(model) => sample_local_model(
                model,
                pair,
                plan.pairs_per_setting,
                chunks.clone(),
                plan.seed,
                stream,
            ),
            quantum => {
                let dist = quantum.pair_distribution(pair, &plan.quad)?;
                sample_distribution(
                    &dist,
                    plan.pairs_per_setting,
                    chunks.clone(),
                    plan.seed,
                    stream,
                )
            }
        };
        runs.insert(pair, counters);
    }
    Ok(runs)
}

/// Runs the plan on a dedicated pool of `workers` threads.
pub fn run_experiment_with_workers(plan: &RunPlan, workers: usize) -> Result<RunCounters> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Unsupported(format!("cannot start worker pool: {e}")))?;
    pool.install(|| run_experiment(plan))
}

/// Plain-text record of a plan and the totals it produced.
pub fn run_manifest(plan: &RunPlan, runs: &RunCounters) -> String {
    let q = &plan.quad;
    let mut out = String::from("belltest run manifest\n");
    out.push_str(&format!("source = {}\n", plan.source));
    out.push_str(&format!(
        "quad = a={} b={} a_prime={} b_prime={}\n",
        q.a, q.b, q.a_prime, q.b_prime
    ));
    out.push_str(&format!("pairs_per_setting = {}\n", plan.pairs_per_setting));
    out.push_str(&format!("seed = {}\n", plan.seed));
    out.push_str(&format!("chunk_emissions = {CHUNK_EMISSIONS}\n"));
    for (pair, c) in runs {
        out.push_str(&format!(
            "[{}] n_emitted={} coincidences={} singles_first={} singles_second={}\n",
            pair.label(),
            c.n_emitted(),
            c.coincidences(),
            c.first_singles(Outcome::Plus) + c.first_singles(Outcome::Minus),
            c.second_singles(Outcome::Plus) + c.second_singles(Outcome::Minus),
        ));
    }
    out
}
