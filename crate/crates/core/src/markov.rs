//! The Markov chain of an automaton reading a lasso word, and its
//! recurrent-class analysis.
//!
//! A node is a pair `(state, position)` where `position` ranges over the
//! `|u| + |v|` letters of the lasso; positions at or after `|u|` advance
//! cyclically through the loop. Only nodes reachable from the initial
//! distribution are materialized.

use std::collections::{BTreeMap, VecDeque};

use num_traits::{One, Zero};

use crate::automaton::WeightedAutomaton;
use crate::error::{Error, Result};
use crate::graph;
use crate::linalg;
use crate::rational::Rational;
use crate::value::ValueFunction;
use crate::word::{LassoWord, ResolvedWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductNode {
    pub state: usize,
    pub position: usize,
}

/// A product edge, referring back to the automaton edge it came from.
#[derive(Debug, Clone, Copy)]
struct EdgeRef {
    target: usize,
    state: usize,
    letter: usize,
    edge: usize,
}

struct Exploration {
    nodes: Vec<ProductNode>,
    out: Vec<Vec<EdgeRef>>,
    initial: Vec<usize>,
}

fn explore(automaton: &WeightedAutomaton, word: &ResolvedWord) -> Exploration {
    let len = word.len();
    let mut index = vec![usize::MAX; automaton.num_states() * len];
    let mut nodes = Vec::new();
    let mut queue = VecDeque::new();
    let mut intern = |node: ProductNode, nodes: &mut Vec<ProductNode>, queue: &mut VecDeque<usize>| {
        let slot = &mut index[node.state * len + node.position];
        if *slot == usize::MAX {
            *slot = nodes.len();
            nodes.push(node);
            queue.push_back(*slot);
        }
        *slot
    };
    let initial: Vec<usize> = automaton
        .initial_states()
        .map(|q| intern(ProductNode { state: q, position: 0 }, &mut nodes, &mut queue))
        .collect();
    let mut out: Vec<Vec<EdgeRef>> = Vec::new();
    while let Some(v) = queue.pop_front() {
        let ProductNode { state, position } = nodes[v];
        let letter = word.letter(position);
        let next = word.next_position(position);
        let mut succ = Vec::new();
        for (i, e) in automaton.edges(state, letter).iter().enumerate() {
            if e.probability > Rational::zero() {
                let target = intern(ProductNode { state: e.target, position: next }, &mut nodes, &mut queue);
                succ.push(EdgeRef { target, state, letter, edge: i });
            }
        }
        if out.len() <= v {
            out.resize_with(v + 1, Vec::new);
        }
        out[v] = succ;
    }
    out.resize_with(nodes.len(), Vec::new);
    Exploration { nodes, out, initial }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainEdge {
    pub target: usize,
    pub probability: Rational,
    pub weight: Rational,
}

/// The finite Markov chain of an automaton on a lasso word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductChain {
    nodes: Vec<ProductNode>,
    edges: Vec<Vec<ChainEdge>>,
    initial: Vec<(usize, Rational)>,
    prefix_len: usize,
    loop_len: usize,
}

impl ProductChain {
    pub fn nodes(&self) -> &[ProductNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edges(&self, node: usize) -> &[ChainEdge] {
        &self.edges[node]
    }

    /// Initial distribution (the automaton's `ρ_I` at position 0).
    pub fn initial(&self) -> &[(usize, Rational)] {
        &self.initial
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix_len
    }

    pub fn loop_len(&self) -> usize {
        self.loop_len
    }

    pub fn node_index(&self, node: ProductNode) -> Option<usize> {
        self.nodes.iter().position(|n| *n == node)
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        self.edges.iter().map(|out| out.iter().map(|e| e.target).collect()).collect()
    }
}

pub fn build_product(automaton: &WeightedAutomaton, word: &LassoWord) -> Result<ProductChain> {
    let resolved = word.resolve(automaton.alphabet())?;
    Ok(build_product_resolved(automaton, &resolved))
}

pub(crate) fn build_product_resolved(automaton: &WeightedAutomaton, word: &ResolvedWord) -> ProductChain {
    let ex = explore(automaton, word);
    let edges = ex
        .out
        .iter()
        .map(|out| {
            out.iter()
                .map(|r| {
                    let e = &automaton.edges(r.state, r.letter)[r.edge];
                    ChainEdge { target: r.target, probability: e.probability.clone(), weight: e.weight.clone() }
                })
                .collect()
        })
        .collect();
    let initial = automaton
        .initial()
        .iter()
        .filter(|(_, p)| *p > Rational::zero())
        .zip(&ex.initial)
        .map(|((_, p), &node)| (node, p.clone()))
        .collect();
    ProductChain { nodes: ex.nodes, edges, initial, prefix_len: word.prefix.len(), loop_len: word.cycle.len() }
}

/// The support of the product chain: probabilities dropped, weights kept
/// as ranks into the automaton's sorted weight list.
#[derive(Debug, Clone)]
pub struct ProductGraph {
    pub(crate) nodes: Vec<ProductNode>,
    /// `(target, weight level)` per node.
    pub(crate) succ: Vec<Vec<(usize, u32)>>,
    pub(crate) initial: Vec<usize>,
    pub(crate) levels: Vec<Rational>,
}

impl ProductGraph {
    pub fn build(automaton: &WeightedAutomaton, word: &LassoWord) -> Result<Self> {
        Ok(Self::build_resolved(automaton, &word.resolve(automaton.alphabet())?))
    }

    pub(crate) fn build_resolved(automaton: &WeightedAutomaton, word: &ResolvedWord) -> Self {
        let ex = explore(automaton, word);
        let succ = ex
            .out
            .iter()
            .map(|out| out.iter().map(|r| (r.target, automaton.edges(r.state, r.letter)[r.edge].level)).collect())
            .collect();
        ProductGraph { nodes: ex.nodes, succ, initial: ex.initial, levels: automaton.weights().to_vec() }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn weight(&self, level: u32) -> &Rational {
        &self.levels[level as usize]
    }

    /// Adjacency restricted to edges whose level satisfies `keep`.
    pub(crate) fn adjacency_where(&self, keep: impl Fn(u32) -> bool) -> Vec<Vec<usize>> {
        self.succ.iter().map(|out| out.iter().filter(|(_, l)| keep(*l)).map(|(t, _)| *t).collect()).collect()
    }

    pub(crate) fn adjacency(&self) -> Vec<Vec<usize>> {
        self.adjacency_where(|_| true)
    }
}

/// A closed recurrent set (bottom SCC) of a product chain.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RecurrentClass {
    nodes: Vec<usize>,
}

impl RecurrentClass {
    pub(crate) fn new(mut nodes: Vec<usize>) -> Self {
        nodes.sort_unstable();
        RecurrentClass { nodes }
    }

    /// Chain node indices, sorted.
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn contains(&self, node: usize) -> bool {
        self.nodes.binary_search(&node).is_ok()
    }

    /// All chain edges among the class nodes (no edge leaves a bottom class).
    pub fn internal_edges<'a>(&'a self, chain: &'a ProductChain) -> impl Iterator<Item = (usize, &'a ChainEdge)> + 'a {
        self.nodes.iter().flat_map(move |&n| chain.edges(n).iter().map(move |e| (n, e)))
    }
}

/// The bottom SCCs among the (reachable) nodes of the chain.
pub fn bottom_sccs(chain: &ProductChain) -> Vec<RecurrentClass> {
    let adj = chain.adjacency();
    let alive = vec![true; chain.len()];
    let mut classes: Vec<_> = graph::bottom_components(&adj, &alive).into_iter().map(RecurrentClass::new).collect();
    classes.sort();
    classes
}

/// Probability of eventually entering each class, aligned with `classes`.
pub fn absorption_probabilities(chain: &ProductChain, classes: &[RecurrentClass]) -> Result<Vec<Rational>> {
    let n = chain.len();
    let mut class_of = vec![usize::MAX; n];
    for (i, c) in classes.iter().enumerate() {
        for &v in c.nodes() {
            class_of[v] = i;
        }
    }
    let transient: Vec<usize> = (0..n).filter(|&v| class_of[v] == usize::MAX).collect();
    let mut slot = vec![usize::MAX; n];
    for (i, &v) in transient.iter().enumerate() {
        slot[v] = i;
    }
    // (I - P_TT) x = P_T→C
    let t = transient.len();
    let k = classes.len();
    let mut a = vec![vec![Rational::zero(); t]; t];
    let mut b = vec![vec![Rational::zero(); k]; t];
    for (i, &v) in transient.iter().enumerate() {
        a[i][i] += Rational::one();
        for e in chain.edges(v) {
            if slot[e.target] != usize::MAX {
                a[i][slot[e.target]] -= &e.probability;
            } else {
                b[i][class_of[e.target]] += &e.probability;
            }
        }
    }
    let x = linalg::solve(&a, &b)?;
    let mut out = vec![Rational::zero(); k];
    for (v, p) in chain.initial() {
        if class_of[*v] != usize::MAX {
            out[class_of[*v]] += p;
        } else {
            for (j, o) in out.iter_mut().enumerate() {
                *o += p * &x[slot[*v]][j];
            }
        }
    }
    Ok(out)
}

/// The unique distribution `π = πP` of an irreducible class, keyed by chain
/// node.
pub fn stationary_distribution(chain: &ProductChain, cls: &RecurrentClass) -> Result<BTreeMap<usize, Rational>> {
    let nodes = cls.nodes();
    let m = nodes.len();
    let pos = |v: usize| nodes.binary_search(&v).ok();
    // Row j: π_j - Σ_i π_i P(i, j) = 0; last row replaced by Σ π_i = 1.
    let mut a = vec![vec![Rational::zero(); m]; m];
    for (j, row) in a.iter_mut().enumerate() {
        row[j] += Rational::one();
    }
    for (i, &v) in nodes.iter().enumerate() {
        for e in chain.edges(v) {
            let j = pos(e.target).ok_or(Error::InvalidParameter("class is not closed".into()))?;
            a[j][i] -= &e.probability;
        }
    }
    let mut b = vec![vec![Rational::zero()]; m];
    a[m - 1] = vec![Rational::one(); m];
    b[m - 1][0] = Rational::one();
    let x = linalg::solve(&a, &b)?;
    Ok(nodes.iter().zip(x).map(|(&v, row)| (v, row.into_iter().next().expect("one column"))).collect())
}

/// Value that almost every run trapped in `cls` attains.
pub fn class_value(
    valfn: &ValueFunction,
    chain: &ProductChain,
    cls: &RecurrentClass,
    stationary: &BTreeMap<usize, Rational>,
) -> Result<Rational> {
    let weights = || cls.internal_edges(chain).map(|(_, e)| &e.weight);
    match valfn {
        ValueFunction::LimSup => Ok(weights().max().expect("class has edges").clone()),
        ValueFunction::LimInf => Ok(weights().min().expect("class has edges").clone()),
        ValueFunction::LimAvg => {
            let mut total = Rational::zero();
            for (v, e) in cls.internal_edges(chain) {
                total += &stationary[&v] * &e.probability * &e.weight;
            }
            Ok(total)
        }
        other => Err(Error::UnsupportedValueFunction(other.to_string())),
    }
}
