//! Emptiness and universality: the decidability table, subset-graph
//! procedures for `Sup`, and exact discounted optimization for `Disc`.
//!
//! All problems compare against a threshold `ν` with `≥`. An edge is
//! *high* when its weight is at least `ν` and *low* otherwise.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::automaton::WeightedAutomaton;
use crate::error::{Error, Result};
use crate::graph;
use crate::rational::{pow, Rational};
use crate::value::{Discount, Semantics, ValueFunction, ValueKind};
use crate::word::LassoWord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProblemKind {
    Emptiness,
    Universality,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 2] = [ProblemKind::Emptiness, ProblemKind::Universality];
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProblemKind::Emptiness => "emptiness",
            ProblemKind::Universality => "universality",
        })
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "emptiness" => Ok(ProblemKind::Emptiness),
            "universality" => Ok(ProblemKind::Universality),
            _ => Err(Error::InvalidParameter(format!("unknown problem {s:?}"))),
        }
    }
}

/// Emptiness asks whether some word has value `≥ threshold`; universality
/// whether every word does.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionProblem {
    pub kind: ProblemKind,
    pub threshold: Rational,
}

impl DecisionProblem {
    pub fn emptiness(threshold: Rational) -> Self {
        DecisionProblem { kind: ProblemKind::Emptiness, threshold }
    }

    pub fn universality(threshold: Rational) -> Self {
        DecisionProblem { kind: ProblemKind::Universality, threshold }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Decidable,
    Undecidable,
    Open,
    /// Outside the table (limit functions under the non-probabilistic
    /// semantics).
    Unclassified,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Decidable => "Decidable",
            Status::Undecidable => "Undecidable",
            Status::Open => "Open",
            Status::Unclassified => "Unclassified",
        })
    }
}

pub const DISC_FOOTNOTE: &str = "(1) universality of NDisc reduces to this problem; its decidability is unknown";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationEntry {
    pub valfn: ValueKind,
    pub semantics: Semantics,
    pub problem: ProblemKind,
    pub status: Status,
    pub note: Option<String>,
}

impl ClassificationEntry {
    /// `"PosLimSup emptiness"` and the note, if any.
    pub fn describe(&self) -> String {
        let mut s = format!("{}{} {}", self.semantics.acronym(), self.valfn, self.problem);
        if let Some(note) = &self.note {
            s.push(' ');
            s.push_str(note);
        }
        s
    }
}

impl fmt::Display for ClassificationEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.status)?;
        if let Some(note) = &self.note {
            write!(f, " {note}")?;
        }
        Ok(())
    }
}

/// Decidability of `(valfn, semantics, problem)`.
pub fn classify(valfn: ValueKind, semantics: Semantics, problem: ProblemKind) -> ClassificationEntry {
    use ProblemKind::*;
    use Status::*;
    use ValueKind as V;
    let entry = |status, note: Option<&str>| ClassificationEntry {
        valfn,
        semantics,
        problem,
        status,
        note: note.map(str::to_string),
    };
    // Sup and Disc under the non-probabilistic semantics coincide with the
    // probabilistic classes on the same side.
    let row = match semantics {
        Semantics::Nondeterministic | Semantics::Universal => match valfn {
            V::Sup | V::Disc => {
                if semantics == Semantics::Nondeterministic {
                    Semantics::Positive
                } else {
                    Semantics::AlmostSure
                }
            }
            _ => return entry(Unclassified, Some("(not covered by the decidability table)")),
        },
        s => s,
    };
    let (status, footnote) = match (row, valfn, problem) {
        (Semantics::Positive, V::Sup, _) => (Decidable, false),
        (Semantics::Positive, V::LimSup, _) => (Undecidable, false),
        (Semantics::Positive, V::LimInf, _) => (Decidable, false),
        (Semantics::Positive, V::LimAvg, _) => (Open, false),
        (Semantics::Positive, V::Disc, Emptiness) => (Decidable, false),
        (Semantics::Positive, V::Disc, Universality) => (Open, true),
        (_, V::Sup, _) => (Decidable, false),
        (_, V::LimSup, _) => (Decidable, false),
        (_, V::LimInf, _) => (Undecidable, false),
        (_, V::LimAvg, _) => (Open, false),
        (_, V::Disc, Emptiness) => (Open, true),
        (_, V::Disc, Universality) => (Decidable, false),
    };
    entry(status, footnote.then_some(DISC_FOOTNOTE))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClosureOp {
    Max,
    Min,
    Complement,
    Sum,
}

impl ClosureOp {
    pub const ALL: [ClosureOp; 4] = [ClosureOp::Max, ClosureOp::Min, ClosureOp::Complement, ClosureOp::Sum];
}

impl fmt::Display for ClosureOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClosureOp::Max => "max",
            ClosureOp::Min => "min",
            ClosureOp::Complement => "complement",
            ClosureOp::Sum => "sum",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Closure {
    Closed,
    NotClosed,
    Open,
}

impl fmt::Display for Closure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Closure::Closed => "closed",
            Closure::NotClosed => "not closed",
            Closure::Open => "open",
        })
    }
}

/// Closure of a class under an operation; `None` for the non-probabilistic
/// semantics, which the table does not list.
pub fn closure(valfn: ValueKind, semantics: Semantics, op: ClosureOp) -> Option<Closure> {
    use Closure::{Closed as Y, NotClosed as N, Open as Q};
    use ValueKind as V;
    // columns: max, min, complement, sum
    let row: [Closure; 4] = match (semantics, valfn) {
        (Semantics::Positive, V::Sup) => [Y, Y, N, Y],
        (Semantics::Positive, V::LimSup) => [Y, Y, Y, Y],
        (Semantics::Positive, V::LimInf) => [Y, Y, N, Y],
        (Semantics::Positive, V::LimAvg) => [Y, N, N, Q],
        (Semantics::Positive, V::Disc) => [Y, N, N, Y],
        (Semantics::AlmostSure, V::Sup) => [Y, Y, N, Y],
        (Semantics::AlmostSure, V::LimSup) => [Y, Y, N, Y],
        (Semantics::AlmostSure, V::LimInf) => [Y, Y, Y, Y],
        (Semantics::AlmostSure, V::LimAvg) => [N, Y, N, N],
        (Semantics::AlmostSure, V::Disc) => [N, Y, N, Y],
        _ => return None,
    };
    let col = ClosureOp::ALL.iter().position(|o| *o == op).expect("listed");
    Some(row[col])
}

/// A lasso word certifying a decision, with a one-line explanation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub word: LassoWord,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    /// `true` means the language is non-empty (emptiness) or universal.
    pub holds: bool,
    pub witness: Option<Witness>,
}

/// Routes to the implemented procedure for the cell, or reports its status.
pub fn decide(
    automaton: &WeightedAutomaton,
    valfn: &ValueFunction,
    semantics: Semantics,
    problem: &DecisionProblem,
) -> Result<Decision> {
    let entry = classify(valfn.kind(), semantics, problem.kind);
    if entry.status != Status::Decidable {
        return Err(Error::NotDecidable(entry));
    }
    match valfn {
        ValueFunction::Sup => decide_sup_with_witness(automaton, semantics, problem),
        ValueFunction::Disc(lambda) => {
            Ok(Decision { holds: decide_disc(automaton, lambda, semantics, problem)?, witness: None })
        }
        _ => Err(Error::NotDecidable(ClassificationEntry {
            note: Some("(no decision procedure is implemented for this cell)".into()),
            ..entry
        })),
    }
}

pub fn decide_sup(automaton: &WeightedAutomaton, semantics: Semantics, problem: &DecisionProblem) -> Result<bool> {
    Ok(decide_sup_with_witness(automaton, semantics, problem)?.holds)
}

/// Subset-graph procedures. `AlmostSure` is answered as `Universal`.
pub fn decide_sup_with_witness(
    automaton: &WeightedAutomaton,
    semantics: Semantics,
    problem: &DecisionProblem,
) -> Result<Decision> {
    let nu = &problem.threshold;
    let letters = automaton.alphabet().len();
    let name = |a: usize| automaton.alphabet().name(a).to_string();
    let word = |prefix: &[usize], cycle: &[usize]| {
        LassoWord::new(prefix.iter().map(|&a| name(a)), cycle.iter().map(|&a| name(a))).expect("non-empty loop")
    };
    let start: Vec<usize> = automaton.initial_states().collect();
    let existential = matches!(semantics, Semantics::Positive | Semantics::Nondeterministic);

    match (existential, problem.kind) {
        (true, ProblemKind::Emptiness) => {
            // a high edge reachable in the support graph
            let explored = explore(vec![start], |set| {
                (0..letters).map(|a| (a, successors(automaton, set, a, |_| true))).collect()
            });
            for (id, set) in explored.nodes.iter().enumerate() {
                for a in 0..letters {
                    if let Some(q) = set.iter().find(|&&q| has_high(automaton, q, a, nu)) {
                        let mut prefix = explored.path_to(id);
                        prefix.push(a);
                        let w = word(&prefix, &[0]);
                        let description =
                            format!("state {} reaches a high edge on {}", automaton.state_name(*q), name(a));
                        return Ok(Decision { holds: true, witness: Some(Witness { word: w, description }) });
                    }
                }
            }
            Ok(Decision { holds: false, witness: None })
        }
        (false, ProblemKind::Emptiness) => {
            // low-only survivors die out along some word
            let explored = explore(vec![start], |set| {
                (0..letters).map(|a| (a, successors(automaton, set, a, |w| w < nu))).collect()
            });
            match explored.nodes.iter().position(|s| s.is_empty()) {
                Some(id) => {
                    let w = word(&explored.path_to(id), &[0]);
                    let description = "every run hits a high edge along the prefix".to_string();
                    Ok(Decision { holds: true, witness: Some(Witness { word: w, description }) })
                }
                None => Ok(Decision { holds: false, witness: None }),
            }
        }
        (true, ProblemKind::Universality) => {
            // a word on which no run ever sees a high edge
            let explored = explore(vec![start], |set| {
                (0..letters)
                    .filter(|&a| set.iter().all(|&q| !has_high(automaton, q, a, nu)))
                    .map(|a| (a, successors(automaton, set, a, |_| true)))
                    .collect()
            });
            Ok(match explored.lasso(|_| true) {
                Some((prefix, cycle)) => Decision {
                    holds: false,
                    witness: Some(Witness {
                        word: word(&prefix, &cycle),
                        description: "no run ever takes a high edge".into(),
                    }),
                },
                None => Decision { holds: true, witness: None },
            })
        }
        (false, ProblemKind::Universality) => {
            // a word with a run that avoids high edges forever
            let explored = explore(vec![start], |set| {
                if set.is_empty() {
                    Vec::new()
                } else {
                    (0..letters).map(|a| (a, successors(automaton, set, a, |w| w < nu))).collect()
                }
            });
            Ok(match explored.lasso(|s| !s.is_empty()) {
                Some((prefix, cycle)) => Decision {
                    holds: false,
                    witness: Some(Witness {
                        word: word(&prefix, &cycle),
                        description: "some run avoids high edges forever".into(),
                    }),
                },
                None => Decision { holds: true, witness: None },
            })
        }
    }
}

fn has_high(automaton: &WeightedAutomaton, q: usize, a: usize, nu: &Rational) -> bool {
    automaton.edges(q, a).iter().any(|e| e.weight >= *nu)
}

/// Targets of `set` on `a` through edges whose weight passes `keep`.
fn successors(automaton: &WeightedAutomaton, set: &[usize], a: usize, keep: impl Fn(&Rational) -> bool) -> Vec<usize> {
    let out: BTreeSet<usize> = set
        .iter()
        .flat_map(|&q| automaton.edges(q, a).iter())
        .filter(|e| e.probability > Rational::zero() && keep(&e.weight))
        .map(|e| e.target)
        .collect();
    out.into_iter().collect()
}

/// The part of a subset graph reachable from the start node (id 0).
struct Explored {
    nodes: Vec<Vec<usize>>,
    /// `(letter, target)` per node.
    succ: Vec<Vec<(usize, usize)>>,
    /// BFS tree: `(parent, letter)`.
    parent: Vec<Option<(usize, usize)>>,
}

fn explore(start: Vec<Vec<usize>>, step: impl Fn(&[usize]) -> Vec<(usize, Vec<usize>)>) -> Explored {
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut ex = Explored { nodes: Vec::new(), succ: Vec::new(), parent: Vec::new() };
    let mut queue = VecDeque::new();
    for s in start {
        let mut s = s;
        s.sort_unstable();
        s.dedup();
        if !index.contains_key(&s) {
            index.insert(s.clone(), ex.nodes.len());
            ex.nodes.push(s);
            ex.parent.push(None);
            queue.push_back(ex.nodes.len() - 1);
        }
    }
    while let Some(id) = queue.pop_front() {
        let mut out = Vec::new();
        for (a, target) in step(&ex.nodes[id]) {
            let t = match index.get(&target) {
                Some(&t) => t,
                None => {
                    let t = ex.nodes.len();
                    index.insert(target.clone(), t);
                    ex.nodes.push(target);
                    ex.parent.push(Some((id, a)));
                    queue.push_back(t);
                    t
                }
            };
            out.push((a, t));
        }
        if ex.succ.len() <= id {
            ex.succ.resize_with(id + 1, Vec::new);
        }
        ex.succ[id] = out;
    }
    ex.succ.resize_with(ex.nodes.len(), Vec::new);
    ex
}

impl Explored {
    /// Letters along the BFS tree from the start to `id`.
    fn path_to(&self, mut id: usize) -> Vec<usize> {
        let mut letters = Vec::new();
        while let Some((p, a)) = self.parent[id] {
            letters.push(a);
            id = p;
        }
        letters.reverse();
        letters
    }

    /// A reachable cycle through nodes satisfying `keep` (all of them
    /// reachable by construction), as `(prefix, loop)` letters.
    fn lasso(&self, keep: impl Fn(&[usize]) -> bool) -> Option<(Vec<usize>, Vec<usize>)> {
        let alive: Vec<bool> = self.nodes.iter().map(|s| keep(s)).collect();
        let adj: Vec<Vec<usize>> =
            self.succ
                .iter()
                .enumerate()
                .map(|(v, out)| {
                    if alive[v] {
                        out.iter().filter(|(_, t)| alive[*t]).map(|(_, t)| *t).collect()
                    } else {
                        Vec::new()
                    }
                })
                .collect();
        let comps = graph::strongly_connected_components(&adj);
        let comp = comps.iter().find(|c| alive[c[0]] && graph::is_nontrivial(&adj, c))?;
        let v = comp[0];
        let members: BTreeSet<usize> = comp.iter().copied().collect();
        // shortest cycle back to v inside the component
        let mut back: HashMap<usize, (usize, usize)> = HashMap::new();
        let mut queue = VecDeque::new();
        for &(a, t) in &self.succ[v] {
            if members.contains(&t) && !back.contains_key(&t) {
                back.insert(t, (v, a));
                queue.push_back(t);
            }
        }
        while let Some(u) = queue.pop_front() {
            if u == v {
                break;
            }
            for &(a, t) in &self.succ[u] {
                if members.contains(&t) && !back.contains_key(&t) {
                    back.insert(t, (u, a));
                    queue.push_back(t);
                }
            }
        }
        let mut cycle = Vec::new();
        let mut cur = v;
        loop {
            let (p, a) = back[&cur];
            cycle.push(a);
            cur = p;
            if cur == v {
                break;
            }
        }
        cycle.reverse();
        Some((self.path_to(v), cycle))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Max,
    Min,
}

/// A finite graph where each node picks one outgoing `(target, weight)`
/// choice per step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChoiceGraph {
    pub succ: Vec<Vec<(usize, Rational)>>,
}

impl ChoiceGraph {
    /// Choices `(σ, q')` of the support graph of an automaton.
    pub fn from_automaton(automaton: &WeightedAutomaton) -> Self {
        let succ = (0..automaton.num_states())
            .map(|q| {
                (0..automaton.alphabet().len())
                    .flat_map(|a| automaton.edges(q, a).iter())
                    .filter(|e| e.probability > Rational::zero())
                    .map(|e| (e.target, e.weight.clone()))
                    .collect()
            })
            .collect();
        ChoiceGraph { succ }
    }
}

/// The fixpoint of `V(q) = mode over choices of [w + λ·V(q')]`, by policy
/// iteration.
pub fn optimal_discounted_value(graph: &ChoiceGraph, discount: &Discount, mode: Mode) -> Result<Vec<Rational>> {
    if let Some(v) = graph.succ.iter().position(Vec::is_empty) {
        return Err(Error::DeadEnd(v));
    }
    let lambda = discount.value();
    let better = |x: &Rational, y: &Rational| match mode {
        Mode::Max => x > y,
        Mode::Min => x < y,
    };
    let mut policy = vec![0usize; graph.succ.len()];
    loop {
        let values = evaluate_policy(graph, &policy, lambda);
        let mut changed = false;
        for (v, choices) in graph.succ.iter().enumerate() {
            let q = |j: usize| &choices[j].1 + lambda * &values[choices[j].0];
            let qs: Vec<Rational> = (0..choices.len()).map(q).collect();
            let mut best = 0;
            for j in 1..qs.len() {
                if better(&qs[j], &qs[best]) {
                    best = j;
                }
            }
            // switch only on strict improvement, to the least best choice
            if better(&qs[best], &qs[policy[v]]) {
                policy[v] = best;
                changed = true;
            }
        }
        if !changed {
            debug_assert!(graph.succ.iter().enumerate().all(|(v, choices)| {
                let qs = choices.iter().map(|(t, w)| w + lambda * &values[*t]);
                let opt = match mode {
                    Mode::Max => qs.max(),
                    Mode::Min => qs.min(),
                };
                opt.as_ref() == Some(&values[v])
            }));
            return Ok(values);
        }
    }
}

/// Exact value of a positional policy: each node has one successor, so the
/// graph is functional and every value follows from its cycle in closed form.
pub(crate) fn evaluate_policy(graph: &ChoiceGraph, policy: &[usize], lambda: &Rational) -> Vec<Rational> {
    let n = graph.succ.len();
    let step = |v: usize| &graph.succ[v][policy[v]];
    let mut values: Vec<Option<Rational>> = vec![None; n];
    let mut on_path = vec![false; n];
    for start in 0..n {
        if values[start].is_some() {
            continue;
        }
        let mut path = Vec::new();
        let mut cur = start;
        while values[cur].is_none() && !on_path[cur] {
            on_path[cur] = true;
            path.push(cur);
            cur = step(cur).0;
        }
        if values[cur].is_none() {
            // cur closes a cycle on the current path
            let at = path.iter().position(|&v| v == cur).expect("on path");
            let cycle = path.split_off(at);
            let mut head = Rational::zero();
            let mut factor = Rational::one();
            for &v in &cycle {
                head += &factor * &step(v).1;
                factor *= lambda;
            }
            values[cycle[0]] = Some(head / (Rational::one() - pow(lambda, cycle.len())));
            for &v in cycle.iter().skip(1).rev() {
                let (t, w) = step(v);
                values[v] = Some(w + lambda * values[*t].as_ref().expect("successor done"));
            }
        }
        for &v in path.iter().rev() {
            let (t, w) = step(v);
            values[v] = Some(w + lambda * values[*t].as_ref().expect("successor done"));
        }
    }
    values.into_iter().map(|v| v.expect("all evaluated")).collect()
}

/// Disc emptiness (positive / nondeterministic) and universality
/// (almost-sure / universal).
pub fn decide_disc(
    automaton: &WeightedAutomaton,
    discount: &Discount,
    semantics: Semantics,
    problem: &DecisionProblem,
) -> Result<bool> {
    let mode = match (semantics, problem.kind) {
        (Semantics::Positive | Semantics::Nondeterministic, ProblemKind::Emptiness) => Mode::Max,
        (Semantics::AlmostSure | Semantics::Universal, ProblemKind::Universality) => Mode::Min,
        _ => return Err(Error::NotDecidable(classify(ValueKind::Disc, semantics, problem.kind))),
    };
    let values = optimal_discounted_value(&ChoiceGraph::from_automaton(automaton), discount, mode)?;
    let at_initial = automaton.initial_states().map(|q| &values[q]);
    let v = match mode {
        Mode::Max => at_initial.max(),
        Mode::Min => at_initial.min(),
    }
    .ok_or(Error::NoInitialState)?;
    Ok(*v >= problem.threshold)
}
