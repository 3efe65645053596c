//! The probabilistic weighted automaton data model.
//!
//! An automaton is a tuple of states, an initial distribution, an alphabet,
//! and for every `(state, letter)` a finite distribution over successors in
//! which each support edge also carries a rational weight. States and
//! letters are addressed by index; names are kept for display and I/O.
//!
//! Construction never panics on bad data: [`WeightedAutomaton::from_parts`]
//! stores whatever it is given and [`WeightedAutomaton::validate`] reports
//! every broken invariant. [`WeightedAutomaton::new`] and
//! [`AutomatonBuilder::build`] combine the two.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

/// An ordered list of distinct letter names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(letters: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Alphabet { letters: letters.into_iter().map(Into::into).collect() }
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn index_of(&self, letter: &str) -> Option<usize> {
        self.letters.iter().position(|l| l == letter)
    }

    pub fn name(&self, index: usize) -> &str {
        &self.letters[index]
    }
}

/// One support edge of `δ(q, σ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub target: usize,
    pub probability: Rational,
    pub weight: Rational,
    /// Rank of `weight` among the automaton's distinct weights.
    pub(crate) level: u32,
}

impl Edge {
    pub fn new(target: usize, probability: Rational, weight: Rational) -> Self {
        Edge { target, probability, weight, level: 0 }
    }
}

/// A broken [`WeightedAutomaton`] invariant, with its location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoStates,
    EmptyStateName(usize),
    DuplicateState(String),
    EmptyAlphabet,
    EmptyLetterName(usize),
    DuplicateLetter(String),
    UndeclaredState(String),
    UndeclaredLetter(String),
    InitialUndeclared(usize),
    InitialNotPositive { state: String, probability: Rational },
    InitialSum(Rational),
    DuplicateInitial(String),
    MissingRow { state: String, letter: String },
    RowSum { state: String, letter: String, sum: Rational },
    TargetUndeclared { state: String, letter: String, target: usize },
    ProbabilityNotPositive { state: String, letter: String, target: String, probability: Rational },
    DuplicateEdge { state: String, letter: String, target: String },
    MissingWeight { state: String, letter: String, target: String },
    DuplicateStateWeight(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        let r = format_rational;
        match self {
            NoStates => write!(f, "no states declared"),
            EmptyStateName(i) => write!(f, "state #{i} has an empty name"),
            DuplicateState(s) => write!(f, "state {s:?} declared twice"),
            EmptyAlphabet => write!(f, "alphabet is empty"),
            EmptyLetterName(i) => write!(f, "letter #{i} has an empty name"),
            DuplicateLetter(l) => write!(f, "letter {l:?} declared twice"),
            UndeclaredState(s) => write!(f, "state {s:?} is referenced but not declared"),
            UndeclaredLetter(l) => write!(f, "letter {l:?} is referenced but not declared"),
            InitialUndeclared(i) => write!(f, "initial distribution names undeclared state #{i}"),
            InitialNotPositive { state, probability } => {
                write!(f, "initial probability of {state:?} is {} (must be > 0)", r(probability))
            }
            InitialSum(sum) => write!(f, "initial distribution sums to {} \u{2260} 1", r(sum)),
            DuplicateInitial(s) => write!(f, "initial probability of {s:?} given twice"),
            MissingRow { state, letter } => write!(f, "no transitions for ({state}, {letter})"),
            RowSum { state, letter, sum } => {
                write!(f, "row sum of \u{3b4}({state}, {letter}) is {} \u{2260} 1", r(sum))
            }
            TargetUndeclared { state, letter, target } => {
                write!(f, "\u{3b4}({state}, {letter}) names undeclared state #{target}")
            }
            ProbabilityNotPositive { state, letter, target, probability } => write!(
                f,
                "edge ({state}, {letter}, {target}) has probability {} (weights exist only on edges with probability > 0)",
                r(probability)
            ),
            DuplicateEdge { state, letter, target } => {
                write!(f, "edge ({state}, {letter}, {target}) listed twice")
            }
            MissingWeight { state, letter, target } => write!(
                f,
                "edge ({state}, {letter}, {target}) has no weight and {state:?} has no state weight"
            ),
            DuplicateStateWeight(s) => write!(f, "state weight of {s:?} given twice"),
        }
    }
}

/// `A = ⟨Q, ρ_I, Σ, δ, γ⟩` with `γ` stored on the support edges of `δ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedAutomaton {
    states: Vec<String>,
    alphabet: Alphabet,
    initial: Vec<(usize, Rational)>,
    /// `transitions[q][σ]`, sorted by target.
    transitions: Vec<Vec<Vec<Edge>>>,
    levels: Vec<Rational>,
}

impl WeightedAutomaton {
    /// Assembles an automaton without checking any invariant. Missing
    /// `(state, letter)` rows are filled with empty rows (which
    /// [`validate`](Self::validate) then reports).
    pub fn from_parts(
        states: Vec<String>,
        alphabet: Alphabet,
        initial: Vec<(usize, Rational)>,
        mut transitions: Vec<Vec<Vec<Edge>>>,
    ) -> Self {
        transitions.resize_with(states.len(), Vec::new);
        for row in &mut transitions {
            row.resize_with(alphabet.len(), Vec::new);
            for edges in row.iter_mut() {
                edges.sort_by_key(|e| e.target);
            }
        }
        let mut initial = initial;
        initial.sort_by_key(|(q, _)| *q);

        let levels: Vec<Rational> = transitions
            .iter()
            .flatten()
            .flatten()
            .map(|e| e.weight.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        for edge in transitions.iter_mut().flatten().flatten() {
            edge.level = levels.binary_search(&edge.weight).expect("weight collected") as u32;
        }
        WeightedAutomaton { states, alphabet, initial, transitions, levels }
    }

    /// [`from_parts`](Self::from_parts) followed by validation.
    pub fn new(
        states: Vec<String>,
        alphabet: Alphabet,
        initial: Vec<(usize, Rational)>,
        transitions: Vec<Vec<Vec<Edge>>>,
    ) -> Result<Self> {
        let automaton = Self::from_parts(states, alphabet, initial, transitions);
        let report = automaton.validate();
        if report.is_empty() {
            Ok(automaton)
        } else {
            Err(Error::Invalid(report))
        }
    }

    /// Lists every violated invariant; an empty list means the automaton is
    /// valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.states.is_empty() {
            out.push(Violation::NoStates);
        }
        let mut seen = BTreeSet::new();
        for (i, s) in self.states.iter().enumerate() {
            if s.is_empty() {
                out.push(Violation::EmptyStateName(i));
            } else if !seen.insert(s.as_str()) {
                out.push(Violation::DuplicateState(s.clone()));
            }
        }
        if self.alphabet.is_empty() {
            out.push(Violation::EmptyAlphabet);
        }
        let mut seen = BTreeSet::new();
        for (i, l) in self.alphabet.letters().iter().enumerate() {
            if l.is_empty() {
                out.push(Violation::EmptyLetterName(i));
            } else if !seen.insert(l.as_str()) {
                out.push(Violation::DuplicateLetter(l.clone()));
            }
        }

        let name = |q: usize| self.states.get(q).cloned().unwrap_or_else(|| format!("#{q}"));
        let mut sum = Rational::zero();
        let mut seen = BTreeSet::new();
        for (q, p) in &self.initial {
            if *q >= self.states.len() {
                out.push(Violation::InitialUndeclared(*q));
                continue;
            }
            if !seen.insert(*q) {
                out.push(Violation::DuplicateInitial(name(*q)));
            }
            if *p <= Rational::zero() {
                out.push(Violation::InitialNotPositive { state: name(*q), probability: p.clone() });
            }
            sum += p;
        }
        if !sum.is_one() {
            out.push(Violation::InitialSum(sum));
        }

        for (q, row) in self.transitions.iter().enumerate() {
            for (a, edges) in row.iter().enumerate() {
                let state = name(q);
                let letter = self.alphabet.name(a).to_string();
                if edges.is_empty() {
                    out.push(Violation::MissingRow { state, letter });
                    continue;
                }
                let mut sum = Rational::zero();
                let mut targets = BTreeSet::new();
                for e in edges {
                    if e.target >= self.states.len() {
                        out.push(Violation::TargetUndeclared {
                            state: state.clone(),
                            letter: letter.clone(),
                            target: e.target,
                        });
                        continue;
                    }
                    if !targets.insert(e.target) {
                        out.push(Violation::DuplicateEdge {
                            state: state.clone(),
                            letter: letter.clone(),
                            target: name(e.target),
                        });
                    }
                    if e.probability <= Rational::zero() {
                        out.push(Violation::ProbabilityNotPositive {
                            state: state.clone(),
                            letter: letter.clone(),
                            target: name(e.target),
                            probability: e.probability.clone(),
                        });
                    }
                    sum += &e.probability;
                }
                if !sum.is_one() {
                    out.push(Violation::RowSum { state, letter, sum });
                }
            }
        }
        out
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.states[q]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// `ρ_I` as `(state, probability)` pairs sorted by state.
    pub fn initial(&self) -> &[(usize, Rational)] {
        &self.initial
    }

    pub fn initial_states(&self) -> impl Iterator<Item = usize> + '_ {
        self.initial.iter().filter(|(_, p)| *p > Rational::zero()).map(|(q, _)| *q)
    }

    /// Support edges of `δ(q, σ)`, sorted by target.
    pub fn edges(&self, state: usize, letter: usize) -> &[Edge] {
        &self.transitions[state][letter]
    }

    pub fn transitions(&self) -> &[Vec<Vec<Edge>>] {
        &self.transitions
    }

    /// Distinct edge weights in increasing order.
    pub fn weights(&self) -> &[Rational] {
        &self.levels
    }

    pub fn min_weight(&self) -> Option<&Rational> {
        self.levels.first()
    }

    pub fn max_weight(&self) -> Option<&Rational> {
        self.levels.last()
    }

    pub fn is_deterministic(&self) -> bool {
        self.initial.len() == 1
            && self.initial[0].1.is_one()
            && self.transitions.iter().flatten().all(|edges| edges.len() == 1)
    }

    pub fn is_dirac(&self) -> bool {
        self.initial.len() == 1 && self.initial[0].1.is_one()
    }

    /// Returns a copy with every edge weight mapped through `f`.
    pub fn map_weights(&self, mut f: impl FnMut(&Rational) -> Rational) -> Self {
        let transitions = self
            .transitions
            .iter()
            .map(|row| {
                row.iter()
                    .map(|edges| {
                        edges.iter().map(|e| Edge::new(e.target, e.probability.clone(), f(&e.weight))).collect()
                    })
                    .collect()
            })
            .collect();
        Self::from_parts(self.states.clone(), self.alphabet.clone(), self.initial.clone(), transitions)
    }

    /// Same alphabet (same letters in the same order).
    pub fn check_same_alphabet(&self, other: &Self) -> Result<()> {
        if self.alphabet == other.alphabet {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch {
                left: self.alphabet.letters().to_vec(),
                right: other.alphabet.letters().to_vec(),
            })
        }
    }
}

/// Replaces every weight `w` by `-w`.
pub fn negate_weights(automaton: &WeightedAutomaton) -> WeightedAutomaton {
    automaton.map_weights(|w| -w)
}

/// An edge of the non-probabilistic automaton underlying `A`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SupportEdge {
    pub from: usize,
    pub letter: usize,
    pub to: usize,
    pub weight: Rational,
}

/// The automaton obtained by forgetting probabilities: `q` is initial iff
/// `ρ_I(q) > 0`, and `(q, σ, q')` is an edge iff `δ(q, σ)(q') > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportGraph {
    pub states: Vec<String>,
    pub alphabet: Alphabet,
    pub initial: BTreeSet<usize>,
    pub edges: Vec<SupportEdge>,
}

impl SupportGraph {
    /// Successors of `state` on `letter`, as `(target, weight)`.
    pub fn successors(&self, state: usize, letter: usize) -> impl Iterator<Item = (usize, &Rational)> {
        self.edges.iter().filter(move |e| e.from == state && e.letter == letter).map(|e| (e.to, &e.weight))
    }
}

pub fn support_automaton(automaton: &WeightedAutomaton) -> SupportGraph {
    let mut edges = Vec::new();
    for (q, row) in automaton.transitions.iter().enumerate() {
        for (a, out) in row.iter().enumerate() {
            for e in out.iter().filter(|e| e.probability > Rational::zero()) {
                edges.push(SupportEdge { from: q, letter: a, to: e.target, weight: e.weight.clone() });
            }
        }
    }
    SupportGraph {
        states: automaton.states.clone(),
        alphabet: automaton.alphabet.clone(),
        initial: automaton.initial_states().collect(),
        edges,
    }
}

/// Turns a support graph back into a probabilistic automaton with uniform
/// distributions over the successors of each `(q, σ)` and over the initial
/// states.
pub fn uniformize(graph: &SupportGraph) -> Result<WeightedAutomaton> {
    if graph.initial.is_empty() {
        return Err(Error::NoInitialState);
    }
    let mut rows: BTreeMap<(usize, usize), BTreeMap<usize, Rational>> = BTreeMap::new();
    for e in &graph.edges {
        rows.entry((e.from, e.letter)).or_default().insert(e.to, e.weight.clone());
    }
    let mut transitions = vec![vec![Vec::new(); graph.alphabet.len()]; graph.states.len()];
    for (q, row) in transitions.iter_mut().enumerate() {
        for (a, slot) in row.iter_mut().enumerate() {
            let succ = rows.get(&(q, a)).ok_or_else(|| Error::NotTotal {
                state: graph.states[q].clone(),
                letter: graph.alphabet.name(a).to_string(),
            })?;
            let p = Rational::new(1.into(), (succ.len() as i64).into());
            *slot = succ.iter().map(|(t, w)| Edge::new(*t, p.clone(), w.clone())).collect();
        }
    }
    let p = Rational::new(1.into(), (graph.initial.len() as i64).into());
    let initial = graph.initial.iter().map(|q| (*q, p.clone())).collect();
    WeightedAutomaton::new(graph.states.clone(), graph.alphabet.clone(), initial, transitions)
}

/// Name-based construction of automata, used for fixtures, documents and
/// tests. Unknown names become [`Violation`]s at [`build`](Self::build).
#[derive(Debug, Clone)]
pub struct AutomatonBuilder {
    alphabet: Vec<String>,
    states: Vec<String>,
    initial: Vec<(String, Rational)>,
    edges: Vec<(String, String, String, Rational, Rational)>,
}

impl AutomatonBuilder {
    pub fn new<I, S>(alphabet: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        AutomatonBuilder {
            alphabet: alphabet.into_iter().map(Into::into).collect(),
            states: Vec::new(),
            initial: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn state(mut self, name: impl Into<String>) -> Self {
        self.states.push(name.into());
        self
    }

    pub fn states<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.states.extend(names.into_iter().map(Into::into));
        self
    }

    pub fn initial(mut self, state: impl Into<String>, probability: Rational) -> Self {
        self.initial.push((state.into(), probability));
        self
    }

    pub fn edge(
        mut self,
        from: impl Into<String>,
        letter: impl Into<String>,
        to: impl Into<String>,
        probability: Rational,
        weight: Rational,
    ) -> Self {
        self.edges.push((from.into(), letter.into(), to.into(), probability, weight));
        self
    }

    /// Adds `from --letter--> to` on every letter of the alphabet.
    pub fn edge_all_letters(mut self, from: &str, to: &str, probability: Rational, weight: Rational) -> Self {
        for letter in self.alphabet.clone() {
            self = self.edge(from, letter, to, probability.clone(), weight.clone());
        }
        self
    }

    pub fn build(self) -> Result<WeightedAutomaton> {
        let mut violations = Vec::new();
        let state_ix: HashMap<&str, usize> = self.states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let letter_ix: HashMap<&str, usize> = self.alphabet.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let lookup_state = |name: &str, violations: &mut Vec<Violation>| {
            let found = state_ix.get(name).copied();
            if found.is_none() {
                violations.push(Violation::UndeclaredState(name.to_string()));
            }
            found
        };

        let mut initial = Vec::new();
        for (s, p) in &self.initial {
            if let Some(q) = lookup_state(s, &mut violations) {
                initial.push((q, p.clone()));
            }
        }
        let mut transitions = vec![vec![Vec::new(); self.alphabet.len()]; self.states.len()];
        for (from, letter, to, p, w) in &self.edges {
            let q = lookup_state(from, &mut violations);
            let t = lookup_state(to, &mut violations);
            let a = letter_ix.get(letter.as_str()).copied();
            if a.is_none() {
                violations.push(Violation::UndeclaredLetter(letter.clone()));
            }
            if let (Some(q), Some(t), Some(a)) = (q, t, a) {
                transitions[q][a].push(Edge::new(t, p.clone(), w.clone()));
            }
        }
        let automaton = WeightedAutomaton::from_parts(self.states, Alphabet::new(self.alphabet), initial, transitions);
        violations.extend(automaton.validate());
        if violations.is_empty() {
            Ok(automaton)
        } else {
            Err(Error::Invalid(violations))
        }
    }
}
