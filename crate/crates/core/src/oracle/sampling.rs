//! Monte-Carlo run sampling.
//!
//! Runs are drawn directly from the automaton with floating-point
//! probabilities, independently of the exact Markov-chain machinery. Run
//! `i` uses a ChaCha8 generator seeded with `seed` on stream `i`, so the
//! report does not depend on the order in which runs are drawn.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::automaton::WeightedAutomaton;
use crate::error::{Error, Result};
use crate::rational::{format_rational, to_f64, Rational};
use crate::value::ValueFunction;
use crate::word::LassoWord;

#[derive(Debug, Clone, PartialEq)]
pub struct SampleReport {
    pub samples: usize,
    pub horizon: usize,
    pub seed: u64,
    pub empirical_mean: f64,
    /// Frequency of runs whose statistic is at least the threshold, for
    /// every edge weight of the automaton.
    pub p_at_or_above: BTreeMap<Rational, f64>,
    statistics: Vec<f64>,
}

impl SampleReport {
    /// Per-run truncated statistics, in run order.
    pub fn statistics(&self) -> &[f64] {
        &self.statistics
    }

    pub fn frequency_at_or_above(&self, eta: f64) -> f64 {
        self.statistics.iter().filter(|&&x| x >= eta).count() as f64 / self.samples as f64
    }
}

/// The `key=value` block printed by the command line.
impl fmt::Display for SampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "samples={}", self.samples)?;
        writeln!(f, "horizon={}", self.horizon)?;
        writeln!(f, "seed={}", self.seed)?;
        writeln!(f, "empirical_mean={:.6}", self.empirical_mean)?;
        for (eta, p) in &self.p_at_or_above {
            writeln!(f, "p_at_or_above[{}]={:.6}", format_rational(eta), p)?;
        }
        Ok(())
    }
}

/// Cumulative distributions per `(state, letter)`.
struct Sampler {
    rows: Vec<Vec<Vec<(f64, usize, f64)>>>,
    initial: Vec<(f64, usize)>,
}

impl Sampler {
    fn new(a: &WeightedAutomaton) -> Self {
        let rows = a
            .transitions()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|edges| {
                        let mut acc = 0.0;
                        edges
                            .iter()
                            .map(|e| {
                                acc += to_f64(&e.probability);
                                (acc, e.target, to_f64(&e.weight))
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let mut acc = 0.0;
        let initial = a
            .initial()
            .iter()
            .map(|(q, p)| {
                acc += to_f64(p);
                (acc, *q)
            })
            .collect();
        Sampler { rows, initial }
    }

    fn pick<T: Copy>(cumulative: &[(f64, T)], u: f64) -> T {
        cumulative.iter().find(|(c, _)| u < *c).unwrap_or(cumulative.last().expect("non-empty")).1
    }
}

/// Samples runs on the word and records a horizon-truncated statistic per
/// run: the average (LimAvg), maximum (LimSup) or minimum (LimInf) over the
/// second half of the horizon, the maximum over the whole horizon (Sup), or
/// the discounted partial sum (Disc).
pub fn monte_carlo(
    automaton: &WeightedAutomaton,
    valfn: &ValueFunction,
    word: &LassoWord,
    horizon: usize,
    samples: usize,
    seed: u64,
) -> Result<SampleReport> {
    let resolved = word.resolve(automaton.alphabet())?;
    if horizon < resolved.len() || horizon < 2 {
        return Err(Error::InvalidParameter(format!(
            "horizon {horizon} is shorter than the lasso ({} letters)",
            resolved.len()
        )));
    }
    if samples == 0 {
        return Err(Error::InvalidParameter("at least one sample is required".into()));
    }
    let sampler = Sampler::new(automaton);
    let lambda = match valfn {
        ValueFunction::Disc(d) => to_f64(d.value()),
        _ => 0.0,
    };
    let tail = horizon / 2;
    let letters: Vec<usize> = (0..horizon)
        .map(|i| {
            if i < resolved.prefix.len() {
                resolved.prefix[i]
            } else {
                resolved.cycle[(i - resolved.prefix.len()) % resolved.cycle.len()]
            }
        })
        .collect();

    let mut statistics = Vec::with_capacity(samples);
    for run in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(run as u64);
        let mut q = Sampler::pick(&sampler.initial, rng.gen::<f64>());
        let (mut sum, mut max, mut min, mut disc, mut factor) = (0.0, f64::NEG_INFINITY, f64::INFINITY, 0.0, 1.0);
        let mut overall_max = f64::NEG_INFINITY;
        for (i, &a) in letters.iter().enumerate() {
            let row = &sampler.rows[q][a];
            let u: f64 = rng.gen();
            let (_, target, w) = *row.iter().find(|(c, _, _)| u < *c).unwrap_or(row.last().expect("total"));
            overall_max = overall_max.max(w);
            disc += factor * w;
            factor *= lambda;
            if i >= tail {
                sum += w;
                max = max.max(w);
                min = min.min(w);
            }
            q = target;
        }
        statistics.push(match valfn {
            ValueFunction::LimAvg => sum / (horizon - tail) as f64,
            ValueFunction::LimSup => max,
            ValueFunction::LimInf => min,
            ValueFunction::Sup => overall_max,
            ValueFunction::Disc(_) => disc,
        });
    }
    let empirical_mean = statistics.iter().sum::<f64>() / samples as f64;
    let mut report =
        SampleReport { samples, horizon, seed, empirical_mean, p_at_or_above: BTreeMap::new(), statistics };
    report.p_at_or_above =
        automaton.weights().iter().map(|eta| (eta.clone(), report.frequency_at_or_above(to_f64(eta)))).collect();
    Ok(report)
}
