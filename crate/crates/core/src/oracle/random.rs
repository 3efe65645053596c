//! Random small automata and lasso words for differential testing.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::automaton::{Alphabet, Edge, WeightedAutomaton};
use crate::rational::{int, ratio, Rational};
use crate::word::LassoWord;

/// The generator used by the test suites.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone)]
pub struct AutomatonShape {
    pub min_states: usize,
    pub max_states: usize,
    pub letters: usize,
    /// Largest denominator of a transition probability.
    pub max_denominator: i64,
    /// Most successors of one `(state, letter)`.
    pub max_branching: usize,
    /// Weights are drawn from this list.
    pub weights: Vec<Rational>,
    /// Probability of a non-Dirac initial distribution.
    pub split_initial: f64,
}

impl Default for AutomatonShape {
    fn default() -> Self {
        AutomatonShape {
            min_states: 1,
            max_states: 4,
            letters: 2,
            max_denominator: 8,
            max_branching: 3,
            weights: (0..4).map(int).collect(),
            split_initial: 0.0,
        }
    }
}

/// `k` positive probabilities with common denominator at most `max_den`.
fn distribution<R: Rng>(rng: &mut R, k: usize, max_den: i64) -> Vec<Rational> {
    let k = k.max(1);
    let den = rng.gen_range(k as i64..=max_den.max(k as i64));
    // split den into k positive parts
    let mut cuts: Vec<i64> = (1..den).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<i64> = cuts.into_iter().take(k - 1).collect();
    cuts.sort_unstable();
    let mut parts = Vec::with_capacity(k);
    let mut last = 0;
    for c in cuts.into_iter().chain(std::iter::once(den)) {
        parts.push(ratio(c - last, den));
        last = c;
    }
    parts
}

pub fn random_automaton<R: Rng>(rng: &mut R, shape: &AutomatonShape) -> WeightedAutomaton {
    let n = rng.gen_range(shape.min_states..=shape.max_states);
    let letters: Vec<String> = (0..shape.letters).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let states: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let mut transitions = Vec::with_capacity(n);
    for _ in 0..n {
        let mut row = Vec::with_capacity(shape.letters);
        for _ in 0..shape.letters {
            let k = rng.gen_range(1..=shape.max_branching.min(n));
            let mut targets: Vec<usize> = (0..n).collect();
            targets.shuffle(rng);
            targets.truncate(k);
            let probs = distribution(rng, k, shape.max_denominator);
            let edges = targets
                .into_iter()
                .zip(probs)
                .map(|(t, p)| Edge::new(t, p, shape.weights.choose(rng).expect("weights").clone()))
                .collect();
            row.push(edges);
        }
        transitions.push(row);
    }
    let initial = if n > 1 && rng.gen_bool(shape.split_initial) {
        let mut qs: Vec<usize> = (0..n).collect();
        qs.shuffle(rng);
        qs.truncate(2);
        qs.into_iter().zip(distribution(rng, 2, shape.max_denominator)).collect()
    } else {
        vec![(rng.gen_range(0..n), int(1))]
    };
    WeightedAutomaton::new(states, Alphabet::new(letters), initial, transitions).expect("generated automaton is valid")
}

pub fn random_lasso<R: Rng>(rng: &mut R, alphabet: &Alphabet, max_prefix: usize, max_loop: usize) -> LassoWord {
    let pick = |rng: &mut R, len: usize| -> Vec<String> {
        (0..len).map(|_| alphabet.name(rng.gen_range(0..alphabet.len())).to_string()).collect()
    };
    let plen = rng.gen_range(0..=max_prefix);
    let prefix = pick(rng, plen);
    let llen = rng.gen_range(1..=max_loop.max(1));
    let cycle = pick(rng, llen);
    LassoWord::new(prefix, cycle).expect("non-empty loop")
}
