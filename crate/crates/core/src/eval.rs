//! Values of lasso words under the four semantics.
//!
//! Limit functions under the probabilistic semantics are read off the
//! recurrent classes of the product chain: every reachable bottom class is
//! entered with positive probability, so the positive value is the largest
//! class value and the almost-sure value the smallest. Everything except
//! the mean-payoff class values only depends on the support of the chain,
//! and is computed on the lighter [`ProductGraph`].

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::automaton::WeightedAutomaton;
use crate::decide::{optimal_discounted_value, ChoiceGraph, Mode};
use crate::error::{Error, Result};
use crate::graph;
use crate::markov::{
    absorption_probabilities, bottom_sccs, build_product_resolved, class_value, stationary_distribution, ProductGraph,
};
use crate::rational::Rational;
use crate::value::{Discount, Semantics, ValueFunction};
use crate::word::{LassoWord, ResolvedWord};

/// The exact law of the run value, as finitely many atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueDistribution {
    atoms: BTreeMap<Rational, Rational>,
}

impl ValueDistribution {
    pub fn atoms(&self) -> &BTreeMap<Rational, Rational> {
        &self.atoms
    }

    pub fn min_value(&self) -> &Rational {
        self.atoms.keys().next().expect("non-empty law")
    }

    pub fn max_value(&self) -> &Rational {
        self.atoms.keys().next_back().expect("non-empty law")
    }

    /// `P(Val ≥ eta)`.
    pub fn probability_at_or_above(&self, eta: &Rational) -> Rational {
        self.atoms.range(eta.clone()..).map(|(_, p)| p).sum()
    }
}

pub fn value_distribution(
    automaton: &WeightedAutomaton,
    valfn: &ValueFunction,
    word: &LassoWord,
) -> Result<ValueDistribution> {
    if !valfn.is_limit() {
        return Err(Error::UnsupportedValueFunction(valfn.to_string()));
    }
    let chain = build_product_resolved(automaton, &word.resolve(automaton.alphabet())?);
    let classes = bottom_sccs(&chain);
    let reach = absorption_probabilities(&chain, &classes)?;
    let mut atoms: BTreeMap<Rational, Rational> = BTreeMap::new();
    for (cls, p) in classes.iter().zip(reach) {
        if p.is_zero() {
            continue;
        }
        let pi = if *valfn == ValueFunction::LimAvg { stationary_distribution(&chain, cls)? } else { BTreeMap::new() };
        *atoms.entry(class_value(valfn, &chain, cls, &pi)?).or_insert_with(Rational::zero) += p;
    }
    Ok(ValueDistribution { atoms })
}

#[derive(Debug, Clone)]
pub struct EvaluationRequest<'a> {
    pub automaton: &'a WeightedAutomaton,
    pub valfn: ValueFunction,
    pub semantics: Semantics,
    pub word: &'a LassoWord,
}

pub fn evaluate(request: &EvaluationRequest<'_>) -> Result<Rational> {
    let word = request.word.resolve(request.automaton.alphabet())?;
    evaluate_resolved(request.automaton, &request.valfn, request.semantics, &word)
}

/// Shorthand for [`evaluate`] without building a request.
pub fn evaluate_word(
    automaton: &WeightedAutomaton,
    valfn: &ValueFunction,
    semantics: Semantics,
    word: &LassoWord,
) -> Result<Rational> {
    evaluate(&EvaluationRequest { automaton, valfn: valfn.clone(), semantics, word })
}

pub(crate) fn evaluate_resolved(
    automaton: &WeightedAutomaton,
    valfn: &ValueFunction,
    semantics: Semantics,
    word: &ResolvedWord,
) -> Result<Rational> {
    use Semantics::*;
    if *valfn == ValueFunction::LimAvg && matches!(semantics, Positive | AlmostSure) {
        let chain = build_product_resolved(automaton, word);
        let mut best: Option<Rational> = None;
        for cls in bottom_sccs(&chain) {
            let pi = stationary_distribution(&chain, &cls)?;
            let v = class_value(valfn, &chain, &cls, &pi)?;
            best = Some(match best {
                None => v,
                Some(b) if semantics == Positive => b.max(v),
                Some(b) => b.min(v),
            });
        }
        return Ok(best.expect("a finite chain has a bottom class"));
    }
    let g = ProductGraph::build_resolved(automaton, word);
    let level = match (valfn, semantics) {
        (ValueFunction::LimSup, Positive) => class_extremum(&g, true, true),
        (ValueFunction::LimSup, AlmostSure) => class_extremum(&g, false, true),
        (ValueFunction::LimInf, Positive) => class_extremum(&g, true, false),
        (ValueFunction::LimInf, AlmostSure) => class_extremum(&g, false, false),
        (ValueFunction::LimSup, Nondeterministic) => cycle_extremum(&g, true, true),
        (ValueFunction::LimInf, Universal) => cycle_extremum(&g, false, false),
        (ValueFunction::LimSup, Universal) => {
            // least η such that some cycle uses only edges ≤ η
            least_level(&g, |l| graph::has_reachable_cycle(&g.adjacency_where(|x| x <= l), 0..g.len()))
        }
        (ValueFunction::LimInf, Nondeterministic) => {
            // greatest η such that some cycle uses only edges ≥ η
            greatest_level(&g, |l| graph::has_reachable_cycle(&g.adjacency_where(|x| x >= l), 0..g.len()))
        }
        (ValueFunction::LimAvg, _) => return Ok(mean_cycle(&g, semantics == Nondeterministic)),
        (ValueFunction::Sup, Positive | Nondeterministic) => {
            g.succ.iter().flatten().map(|(_, l)| *l).max().expect("edges exist")
        }
        (ValueFunction::Sup, Universal) => greatest_level(&g, |l| {
            !graph::has_reachable_cycle(&g.adjacency_where(|x| x < l), g.initial.iter().copied())
        }),
        (ValueFunction::Sup, AlmostSure) => greatest_level(&g, |l| !avoids_with_positive_probability(&g, l)),
        (ValueFunction::Disc(discount), _) => {
            let mode = if matches!(semantics, Positive | Nondeterministic) { Mode::Max } else { Mode::Min };
            return discounted(&g, discount, mode);
        }
    };
    Ok(g.weight(level).clone())
}

/// Max (`over_max`) or min over bottom classes of the max (`internal_max`)
/// or min internal level.
fn class_extremum(g: &ProductGraph, over_max: bool, internal_max: bool) -> u32 {
    let adj = g.adjacency();
    let classes = graph::bottom_components(&adj, &vec![true; g.len()]);
    let values = classes.iter().map(|c| {
        let levels = c.iter().flat_map(|&v| g.succ[v].iter().map(|(_, l)| *l));
        if internal_max { levels.max() } else { levels.min() }.expect("class has edges")
    });
    if over_max { values.max() } else { values.min() }.expect("some class")
}

/// Same over every non-trivial SCC, with edges internal to the SCC.
fn cycle_extremum(g: &ProductGraph, over_max: bool, internal_max: bool) -> u32 {
    let adj = g.adjacency();
    let mut comp_of = vec![usize::MAX; g.len()];
    let comps = graph::strongly_connected_components(&adj);
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v] = i;
        }
    }
    let values = comps.iter().enumerate().filter(|(_, c)| graph::is_nontrivial(&adj, c)).map(|(i, c)| {
        let levels = c.iter().flat_map(|&v| g.succ[v].iter().filter(|(t, _)| comp_of[*t] == i).map(|(_, l)| *l));
        if internal_max { levels.max() } else { levels.min() }.expect("non-trivial component has an internal edge")
    });
    if over_max { values.max() } else { values.min() }.expect("a finite total graph has a cycle")
}

fn used_levels(g: &ProductGraph) -> Vec<u32> {
    let mut levels: Vec<u32> = g.succ.iter().flatten().map(|(_, l)| *l).collect();
    levels.sort_unstable();
    levels.dedup();
    levels
}

/// Least used level satisfying a monotone (false…true) predicate.
fn least_level(g: &ProductGraph, pred: impl Fn(u32) -> bool) -> u32 {
    let levels = used_levels(g);
    let i = levels.partition_point(|&l| !pred(l));
    levels[i.min(levels.len() - 1)]
}

/// Greatest used level satisfying a monotone (true…false) predicate.
fn greatest_level(g: &ProductGraph, pred: impl Fn(u32) -> bool) -> u32 {
    let levels = used_levels(g);
    let i = levels.partition_point(|&l| pred(l));
    levels[i.max(1) - 1]
}

/// Whether runs avoid every edge of level `≥ l` forever with positive
/// probability: redirect those edges to an absorbing hit node and look for
/// another reachable bottom class.
fn avoids_with_positive_probability(g: &ProductGraph, l: u32) -> bool {
    let hit = g.len();
    let mut adj: Vec<Vec<usize>> =
        g.succ.iter().map(|out| out.iter().map(|&(t, x)| if x >= l { hit } else { t }).collect()).collect();
    adj.push(vec![hit]);
    let seen = graph::reachable(&adj, g.initial.iter().copied());
    graph::bottom_components(&adj, &seen).iter().any(|c| c != &[hit])
}

/// Optimal mean weight of a cycle (Karp), max or min over all cycles.
fn mean_cycle(g: &ProductGraph, maximize: bool) -> Rational {
    let adj = g.adjacency();
    let comps = graph::strongly_connected_components(&adj);
    let mut comp_of = vec![usize::MAX; g.len()];
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v] = i;
        }
    }
    let mut best: Option<Rational> = None;
    for (i, comp) in comps.iter().enumerate() {
        if !graph::is_nontrivial(&adj, comp) {
            continue;
        }
        let local: BTreeMap<usize, usize> = comp.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let local = &local;
        let comp_of = &comp_of;
        let edges: Vec<(usize, usize, Rational)> = comp
            .iter()
            .flat_map(|&v| {
                g.succ[v].iter().filter(|(t, _)| comp_of[*t] == i).map(move |&(t, l)| {
                    let w = g.weight(l).clone();
                    (local[&v], local[&t], if maximize { -w } else { w })
                })
            })
            .collect();
        let mut m = karp_min_mean(comp.len(), &edges);
        if maximize {
            m = -m;
        }
        best = Some(match best {
            None => m,
            Some(b) if maximize => b.max(m),
            Some(b) => b.min(m),
        });
    }
    best.expect("a finite total graph has a cycle")
}

/// Karp's minimum cycle mean of a strongly connected graph on `n` nodes.
pub(crate) fn karp_min_mean(n: usize, edges: &[(usize, usize, Rational)]) -> Rational {
    // d[k][v]: least weight of a k-edge walk from node 0 to v
    let mut d: Vec<Vec<Option<Rational>>> = vec![vec![None; n]; n + 1];
    d[0][0] = Some(Rational::zero());
    for k in 1..=n {
        let (prev, cur) = d.split_at_mut(k);
        let (prev, cur) = (&prev[k - 1], &mut cur[0]);
        for (u, v, w) in edges {
            if let Some(du) = &prev[*u] {
                let cand = du + w;
                if cur[*v].as_ref().is_none_or(|c| cand < *c) {
                    cur[*v] = Some(cand);
                }
            }
        }
    }
    let mut best: Option<Rational> = None;
    for (v, dn) in d[n].iter().enumerate() {
        let Some(dn) = dn else { continue };
        let worst = (0..n)
            .filter_map(|k| d[k][v].as_ref().map(|dk| (dn - dk) / Rational::from_integer(((n - k) as i64).into())))
            .max();
        if let Some(x) = worst {
            if best.as_ref().is_none_or(|b| x < *b) {
                best = Some(x);
            }
        }
    }
    best.expect("strongly connected graph has a cycle")
}

fn discounted(g: &ProductGraph, discount: &Discount, mode: Mode) -> Result<Rational> {
    let choices = ChoiceGraph {
        succ: g.succ.iter().map(|out| out.iter().map(|&(t, l)| (t, g.weight(l).clone())).collect()).collect(),
    };
    let values = optimal_discounted_value(&choices, discount, mode)?;
    let at_initial = g.initial.iter().map(|&v| values[v].clone());
    Ok(match mode {
        Mode::Max => at_initial.max(),
        Mode::Min => at_initial.min(),
    }
    .expect("initial node"))
}
