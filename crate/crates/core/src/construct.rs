//! Closure constructions and reductions producing new automata.
//!
//! Product-style constructions only materialize states reachable from the
//! initial distribution, so the state counts below are upper bounds.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::automaton::{Alphabet, Edge, WeightedAutomaton};
use crate::error::{Error, Result};
use crate::rational::{int, ratio, Rational};
use crate::value::{Semantics, ValueKind};

pub use crate::automaton::{support_automaton, uniformize, SupportGraph};

/// Builds the reachable part of an automaton whose states are keys `K`.
/// `step(k, σ)` lists `(target, probability, weight)`; entries with the same
/// target are merged (they must agree on the weight).
fn reachable_automaton<K, S, N>(alphabet: &Alphabet, initial: Vec<(K, Rational)>, step: S, name: N) -> WeightedAutomaton
where
    K: Clone + Eq + std::hash::Hash,
    S: Fn(&K, usize) -> Vec<(K, Rational, Rational)>,
    N: Fn(&K) -> String,
{
    let mut index: HashMap<K, usize> = HashMap::new();
    let mut keys: Vec<K> = Vec::new();
    let mut queue = VecDeque::new();
    let mut intern = |k: K, keys: &mut Vec<K>, queue: &mut VecDeque<usize>| -> usize {
        *index.entry(k.clone()).or_insert_with(|| {
            keys.push(k);
            queue.push_back(keys.len() - 1);
            keys.len() - 1
        })
    };
    let mut init = BTreeMap::new();
    for (k, p) in initial {
        let i = intern(k, &mut keys, &mut queue);
        *init.entry(i).or_insert_with(Rational::zero) += p;
    }
    let mut transitions: Vec<Vec<Vec<Edge>>> = Vec::new();
    while let Some(i) = queue.pop_front() {
        let k = keys[i].clone();
        let mut row = Vec::with_capacity(alphabet.len());
        for a in 0..alphabet.len() {
            let mut merged: BTreeMap<usize, (Rational, Rational)> = BTreeMap::new();
            for (t, p, w) in step(&k, a) {
                let j = intern(t, &mut keys, &mut queue);
                let slot = merged.entry(j).or_insert_with(|| (Rational::zero(), w.clone()));
                assert_eq!(slot.1, w, "merged edges must carry the same weight");
                slot.0 += p;
            }
            row.push(merged.into_iter().map(|(j, (p, w))| Edge::new(j, p, w)).collect());
        }
        if transitions.len() <= i {
            transitions.resize_with(i + 1, Vec::new);
        }
        transitions[i] = row;
    }
    let states = keys.iter().map(name).collect();
    WeightedAutomaton::from_parts(states, alphabet.clone(), init.into_iter().collect(), transitions)
}

fn fresh_name(base: &str, taken: &BTreeSet<String>) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

/// Replaces a non-Dirac initial distribution by a fresh initial state whose
/// first step mixes the initial states' first steps. A successor reached
/// with two different weights is cloned so every weight stays exact.
pub fn normalize_initial(automaton: &WeightedAutomaton) -> WeightedAutomaton {
    if automaton.is_dirac() {
        return automaton.clone();
    }
    let mut names: Vec<String> = automaton.states().to_vec();
    let mut taken: BTreeSet<String> = names.iter().cloned().collect();
    let mut transitions: Vec<Vec<Vec<Edge>>> = automaton.transitions().to_vec();
    let letters = automaton.alphabet().len();
    // (original target, weight) → state index carrying that weight
    let mut copy_of: BTreeMap<(usize, Rational), usize> = BTreeMap::new();
    let mut fresh_row = Vec::with_capacity(letters);
    for a in 0..letters {
        let mut mix: BTreeMap<(usize, Rational), Rational> = BTreeMap::new();
        for (q, p) in automaton.initial() {
            for e in automaton.edges(*q, a) {
                *mix.entry((e.target, e.weight.clone())).or_insert_with(Rational::zero) += p * &e.probability;
            }
        }
        let mut edges: BTreeMap<usize, Edge> = BTreeMap::new();
        for ((t, w), p) in mix {
            let holder = match copy_of.get(&(t, w.clone())) {
                Some(&h) => h,
                None => {
                    let used = copy_of.keys().any(|(u, _)| *u == t);
                    let h = if used {
                        let name = fresh_name(&format!("{}~", automaton.state_name(t)), &taken);
                        taken.insert(name.clone());
                        names.push(name);
                        transitions.push(automaton.transitions()[t].clone());
                        names.len() - 1
                    } else {
                        t
                    };
                    copy_of.insert((t, w.clone()), h);
                    h
                }
            };
            edges.insert(holder, Edge::new(holder, p, w));
        }
        fresh_row.push(edges.into_values().collect());
    }
    let init = fresh_name("init", &taken);
    names.push(init);
    transitions.push(fresh_row);
    let q = names.len() - 1;
    WeightedAutomaton::from_parts(names, automaton.alphabet().clone(), vec![(q, Rational::one())], transitions)
}

/// Fresh initial state moving uniformly to the union of the first-step
/// successors of both operands (state spaces kept disjoint).
pub fn initial_choice(a1: &WeightedAutomaton, a2: &WeightedAutomaton) -> Result<WeightedAutomaton> {
    a1.check_same_alphabet(a2)?;
    let (a1, a2) = (normalize_initial(a1), normalize_initial(a2));
    let n1 = a1.num_states();
    let mut names: Vec<String> = a1.states().iter().map(|s| format!("1:{s}")).collect();
    names.extend(a2.states().iter().map(|s| format!("2:{s}")));
    let shift = |edges: &[Edge], by: usize| -> Vec<Edge> {
        edges.iter().map(|e| Edge::new(e.target + by, e.probability.clone(), e.weight.clone())).collect()
    };
    let mut transitions: Vec<Vec<Vec<Edge>>> = Vec::new();
    for row in a1.transitions() {
        transitions.push(row.iter().map(|edges| shift(edges, 0)).collect());
    }
    for row in a2.transitions() {
        transitions.push(row.iter().map(|edges| shift(edges, n1)).collect());
    }
    let (i1, i2) = (a1.initial()[0].0, a2.initial()[0].0);
    let mut fresh = Vec::new();
    for a in 0..a1.alphabet().len() {
        let succ: Vec<Edge> = shift(a1.edges(i1, a), 0).into_iter().chain(shift(a2.edges(i2, a), n1)).collect();
        let p = ratio(1, succ.len() as i64);
        fresh.push(succ.into_iter().map(|e| Edge::new(e.target, p.clone(), e.weight)).collect());
    }
    names.push("init".to_string());
    transitions.push(fresh);
    let q = names.len() - 1;
    WeightedAutomaton::new(names, a1.alphabet().clone(), vec![(q, Rational::one())], transitions)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Combiner {
    Max,
    Min,
    Sum,
}

impl Combiner {
    fn apply(&self, x: &Rational, y: &Rational) -> Rational {
        match self {
            Combiner::Max => x.max(y).clone(),
            Combiner::Min => x.min(y).clone(),
            Combiner::Sum => x + y,
        }
    }
}

/// Runs both operands in lockstep with independent choices.
pub fn synchronized_product(
    a1: &WeightedAutomaton,
    a2: &WeightedAutomaton,
    combiner: Combiner,
) -> Result<WeightedAutomaton> {
    a1.check_same_alphabet(a2)?;
    let initial = a1
        .initial()
        .iter()
        .flat_map(|(q1, p1)| a2.initial().iter().map(move |(q2, p2)| ((*q1, *q2), p1 * p2)))
        .collect();
    let product = reachable_automaton(
        a1.alphabet(),
        initial,
        |&(q1, q2), a| {
            let mut out = Vec::new();
            for e1 in a1.edges(q1, a) {
                for e2 in a2.edges(q2, a) {
                    out.push((
                        (e1.target, e2.target),
                        &e1.probability * &e2.probability,
                        combiner.apply(&e1.weight, &e2.weight),
                    ));
                }
            }
            out
        },
        |&(q1, q2)| format!("<{},{}>", a1.state_name(q1), a2.state_name(q2)),
    );
    Ok(product)
}

/// The guessed weight pair and turn bit attached to a product state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairTag {
    /// Index into the list of weight pairs `W1 × W2`.
    pub guess: usize,
    /// 1 while waiting for the first operand's guessed weight, 2 for the
    /// second's.
    pub turn: u8,
}

/// LimSup sum. States are `(q1, q2, tag)`. While the guess `(v1, v2)` is
/// held, seeing `v1` on the first operand and then `v2` on the second emits
/// `v1 + v2`; every other step emits the smallest possible sum. After each
/// step the guess is kept or advanced with probability 1/2 each, so every
/// guess is retried forever and a run's LimSup is the largest verifiable
/// sum, which is the sum of the operands' LimSups.
pub fn limsup_sum(a1: &WeightedAutomaton, a2: &WeightedAutomaton) -> Result<WeightedAutomaton> {
    a1.check_same_alphabet(a2)?;
    let pairs: Vec<(Rational, Rational)> =
        a1.weights().iter().flat_map(|v1| a2.weights().iter().map(move |v2| (v1.clone(), v2.clone()))).collect();
    if pairs.is_empty() {
        return Err(Error::InvalidParameter("operands have no edges".into()));
    }
    let filler = a1.weights()[0].clone() + a2.weights()[0].clone();
    let half = ratio(1, 2);
    let start = PairTag { guess: 0, turn: 1 };
    let initial = a1
        .initial()
        .iter()
        .flat_map(|(q1, p1)| a2.initial().iter().map(move |(q2, p2)| ((*q1, *q2, start), p1 * p2)))
        .collect();
    let product = reachable_automaton(
        a1.alphabet(),
        initial,
        |&(q1, q2, tag), a| {
            let (v1, v2) = &pairs[tag.guess];
            let mut out = Vec::new();
            for e1 in a1.edges(q1, a) {
                for e2 in a2.edges(q2, a) {
                    let p = &e1.probability * &e2.probability;
                    let (turn, weight) = match tag.turn {
                        1 if e1.weight == *v1 => (2, filler.clone()),
                        2 if e2.weight == *v2 => (1, v1 + v2),
                        t => (t, filler.clone()),
                    };
                    let keep = PairTag { guess: tag.guess, turn };
                    let next = PairTag { guess: (tag.guess + 1) % pairs.len(), turn: 1 };
                    out.push(((e1.target, e2.target, keep), &p * &half, weight.clone()));
                    out.push(((e1.target, e2.target, next), &p * &half, weight));
                }
            }
            out
        },
        |&(q1, q2, tag)| format!("<{},{}>g{}t{}", a1.state_name(q1), a2.state_name(q2), tag.guess, tag.turn),
    );
    Ok(product)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Acceptance {
    Buchi,
    CoBuchi,
}

impl fmt::Display for Acceptance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Acceptance::Buchi => "buchi",
            Acceptance::CoBuchi => "cobuchi",
        })
    }
}

impl FromStr for Acceptance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "buchi" => Ok(Acceptance::Buchi),
            "cobuchi" => Ok(Acceptance::CoBuchi),
            _ => Err(Error::InvalidParameter(format!("unknown acceptance {s:?}"))),
        }
    }
}

/// An automaton with weights in `{0, 1}`, read as Büchi (LimSup) or
/// coBüchi (LimInf).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanAutomaton {
    pub automaton: WeightedAutomaton,
    pub acceptance: Acceptance,
}

impl BooleanAutomaton {
    pub fn new(automaton: WeightedAutomaton, acceptance: Acceptance) -> Result<Self> {
        if automaton.weights().iter().any(|w| !w.is_zero() && !w.is_one()) {
            return Err(Error::InvalidParameter("boolean automata carry weights 0 and 1 only".into()));
        }
        Ok(BooleanAutomaton { automaton, acceptance })
    }

    /// States all of whose outgoing edges carry weight 1.
    pub fn accepting_states(&self) -> BTreeSet<usize> {
        let a = &self.automaton;
        (0..a.num_states()).filter(|&q| a.transitions()[q].iter().flatten().all(|e| e.weight.is_one())).collect()
    }
}

/// Weight 1 exactly on edges of weight `≥ v`.
pub fn threshold_boolean(automaton: &WeightedAutomaton, v: &Rational, acceptance: Acceptance) -> BooleanAutomaton {
    let automaton = automaton.map_weights(|w| if w >= v { int(1) } else { int(0) });
    BooleanAutomaton { automaton, acceptance }
}

/// Positive coBüchi to positive Büchi. Every step may either stay in the
/// original copy or jump, with half the probability each, into a second
/// copy that commits to staying in `accepting` forever; a copy state
/// outside `accepting` is a rejecting sink.
pub fn cobuchi_to_buchi_positive(input: &BooleanAutomaton, accepting: &BTreeSet<usize>) -> Result<BooleanAutomaton> {
    let a = &input.automaton;
    if !a.is_dirac() {
        return Err(Error::NonDiracInitial);
    }
    let n = a.num_states();
    let taken: BTreeSet<String> = a.states().iter().cloned().collect();
    let mut names = a.states().to_vec();
    let mut copies: BTreeSet<String> = BTreeSet::new();
    for s in a.states() {
        let name = fresh_name(&format!("{s}_c"), &taken.union(&copies).cloned().collect());
        copies.insert(name.clone());
        names.push(name);
    }
    let half = ratio(1, 2);
    let mut transitions = Vec::with_capacity(2 * n);
    for q in 0..n {
        let row = (0..a.alphabet().len())
            .map(|l| {
                let mut edges = Vec::new();
                for e in a.edges(q, l) {
                    let p = &e.probability * &half;
                    edges.push(Edge::new(e.target, p.clone(), int(0)));
                    edges.push(Edge::new(e.target + n, p, int(0)));
                }
                edges
            })
            .collect();
        transitions.push(row);
    }
    for q in 0..n {
        let row = (0..a.alphabet().len())
            .map(|l| {
                if accepting.contains(&q) {
                    a.edges(q, l).iter().map(|e| Edge::new(e.target + n, e.probability.clone(), int(1))).collect()
                } else {
                    vec![Edge::new(q + n, Rational::one(), int(0))]
                }
            })
            .collect();
        transitions.push(row);
    }
    let automaton = WeightedAutomaton::new(names, a.alphabet().clone(), a.initial().to_vec(), transitions)?;
    Ok(BooleanAutomaton { automaton, acceptance: Acceptance::Buchi })
}

/// The constructions offered on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Construction {
    MaxInitial,
    MinInitial,
    ProductMax,
    ProductMin,
    SumLimSup,
    Threshold,
    CoBuchiToBuchi,
    Uniformize,
    Negate,
}

impl Construction {
    /// The closure operation this construction realizes, with the classes
    /// for which its law is established.
    pub fn law(&self) -> Option<(crate::decide::ClosureOp, Vec<(ValueKind, Semantics)>)> {
        use crate::decide::ClosureOp;
        use Semantics::{AlmostSure as As, Positive as Pos};
        let limits = |s| vec![(ValueKind::LimSup, s), (ValueKind::LimInf, s), (ValueKind::LimAvg, s)];
        Some(match self {
            Construction::MaxInitial => (ClosureOp::Max, limits(Pos)),
            Construction::MinInitial => (ClosureOp::Min, limits(As)),
            Construction::ProductMax => (ClosureOp::Max, vec![(ValueKind::LimSup, As)]),
            Construction::ProductMin => (ClosureOp::Min, vec![(ValueKind::LimInf, Pos)]),
            Construction::SumLimSup => (ClosureOp::Sum, vec![(ValueKind::LimSup, Pos), (ValueKind::LimSup, As)]),
            _ => return None,
        })
    }
}
