//! The `.qwa` text format.
//!
//! One declaration per line; `#` starts a comment. Rationals are written
//! `k` or `p/q`, never as decimals.
//!
//! ```text
//! alphabet send ack
//! states q0 q1 q2
//! initial q0 1
//! weight q1 2            # state weight, used by edges without a weight
//! edge q0 send q1 9/10 1 # from letter to probability [weight]
//! ```
//!
//! `alphabet` and `states` appear once each, before anything that names a
//! letter or state. Names may not contain whitespace, `.` or `#`.

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::automaton::{AutomatonBuilder, Violation, WeightedAutomaton};
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct DocumentError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionRecord {
    pub from: String,
    pub letter: String,
    pub to: String,
    pub prob: Rational,
    pub weight: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AutomatonDocument {
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub initial: Vec<(String, Rational)>,
    pub state_weights: Vec<(String, Rational)>,
    pub transitions: Vec<TransitionRecord>,
}

pub fn is_valid_name(name: &str) -> bool {
    !name.is_empty() && !name.chars().any(|c| c.is_whitespace() || c == '.' || c == '#')
}

pub fn parse(text: &str) -> Result<AutomatonDocument, DocumentError> {
    let mut doc = AutomatonDocument::default();
    let (mut have_alphabet, mut have_states) = (false, false);
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: String| DocumentError { line, message };
        let content = raw.split('#').next().unwrap_or("");
        let mut fields = content.split_whitespace();
        let Some(keyword) = fields.next() else { continue };
        let args: Vec<&str> = fields.collect();
        let rational = |s: &str| parse_rational(s).map_err(|e| err(e.to_string()));
        let name = |s: &str| {
            if is_valid_name(s) {
                Ok(s.to_string())
            } else {
                Err(err(format!("invalid name {s:?}")))
            }
        };
        let arity = |lo: usize, hi: usize| {
            if args.len() < lo || args.len() > hi {
                Err(err(format!(
                    "{keyword} takes {} argument(s), got {}",
                    if lo == hi { lo.to_string() } else { format!("{lo}-{hi}") },
                    args.len()
                )))
            } else {
                Ok(())
            }
        };
        match keyword {
            "alphabet" | "states" => {
                let seen = if keyword == "alphabet" { &mut have_alphabet } else { &mut have_states };
                if *seen {
                    return Err(err(format!("{keyword} declared twice")));
                }
                *seen = true;
                let names = args.iter().map(|s| name(s)).collect::<Result<Vec<_>, _>>()?;
                if keyword == "alphabet" {
                    doc.alphabet = names;
                } else {
                    doc.states = names;
                }
            }
            "initial" => {
                arity(2, 2)?;
                doc.initial.push((name(args[0])?, rational(args[1])?));
            }
            "weight" => {
                arity(2, 2)?;
                doc.state_weights.push((name(args[0])?, rational(args[1])?));
            }
            "edge" => {
                arity(4, 5)?;
                doc.transitions.push(TransitionRecord {
                    from: name(args[0])?,
                    letter: name(args[1])?,
                    to: name(args[2])?,
                    prob: rational(args[3])?,
                    weight: args.get(4).map(|w| rational(w)).transpose()?,
                });
            }
            other => return Err(err(format!("unknown declaration {other:?}"))),
        }
    }
    if !have_alphabet {
        return Err(DocumentError { line: 0, message: "missing alphabet declaration".into() });
    }
    if !have_states {
        return Err(DocumentError { line: 0, message: "missing states declaration".into() });
    }
    Ok(doc)
}

/// Canonical text: declarations in the order alphabet, states, initial,
/// weight, edge, each list in stored order.
pub fn serialize(doc: &AutomatonDocument) -> String {
    let mut out = String::new();
    out.push_str(&format!("alphabet {}\n", doc.alphabet.join(" ")));
    out.push_str(&format!("states {}\n", doc.states.join(" ")));
    for (q, p) in &doc.initial {
        out.push_str(&format!("initial {q} {}\n", format_rational(p)));
    }
    for (q, w) in &doc.state_weights {
        out.push_str(&format!("weight {q} {}\n", format_rational(w)));
    }
    for t in &doc.transitions {
        out.push_str(&format!("edge {} {} {} {}", t.from, t.letter, t.to, format_rational(&t.prob)));
        if let Some(w) = &t.weight {
            out.push_str(&format!(" {}", format_rational(w)));
        }
        out.push('\n');
    }
    out
}

impl AutomatonDocument {
    /// Builds and validates the automaton; every problem is reported.
    pub fn to_automaton(&self) -> Result<WeightedAutomaton> {
        let mut violations = Vec::new();
        let mut state_weight: BTreeMap<&str, &Rational> = BTreeMap::new();
        for (q, w) in &self.state_weights {
            if state_weight.insert(q, w).is_some() {
                violations.push(Violation::DuplicateStateWeight(q.clone()));
            }
            if !self.states.contains(q) {
                violations.push(Violation::UndeclaredState(q.clone()));
            }
        }
        let mut b = AutomatonBuilder::new(self.alphabet.clone()).states(self.states.clone());
        for (q, p) in &self.initial {
            b = b.initial(q.clone(), p.clone());
        }
        for t in &self.transitions {
            let weight = t.weight.as_ref().or_else(|| state_weight.get(t.from.as_str()).copied());
            match weight {
                Some(w) => b = b.edge(t.from.clone(), t.letter.clone(), t.to.clone(), t.prob.clone(), w.clone()),
                None => violations.push(Violation::MissingWeight {
                    state: t.from.clone(),
                    letter: t.letter.clone(),
                    target: t.to.clone(),
                }),
            }
        }
        match b.build() {
            Ok(a) if violations.is_empty() => Ok(a),
            Ok(_) => Err(Error::Invalid(violations)),
            Err(Error::Invalid(mut more)) => {
                violations.append(&mut more);
                Err(Error::Invalid(violations))
            }
            Err(e) => Err(e),
        }
    }

    /// Document of an automaton. States whose outgoing edges all share one
    /// weight get a state weight and weightless edges.
    pub fn from_automaton(automaton: &WeightedAutomaton) -> Self {
        let a = automaton;
        let name = |q: usize| a.state_name(q).to_string();
        let mut doc = AutomatonDocument {
            alphabet: a.alphabet().letters().to_vec(),
            states: a.states().to_vec(),
            initial: a.initial().iter().map(|(q, p)| (name(*q), p.clone())).collect(),
            ..Default::default()
        };
        let mut uniform: HashSet<usize> = HashSet::new();
        for q in 0..a.num_states() {
            let mut ws = a.transitions()[q].iter().flatten().map(|e| &e.weight);
            if let Some(first) = ws.next() {
                if ws.all(|w| w == first) {
                    uniform.insert(q);
                    doc.state_weights.push((name(q), first.clone()));
                }
            }
        }
        for q in 0..a.num_states() {
            for l in 0..a.alphabet().len() {
                for e in a.edges(q, l) {
                    doc.transitions.push(TransitionRecord {
                        from: name(q),
                        letter: a.alphabet().name(l).to_string(),
                        to: name(e.target),
                        prob: e.probability.clone(),
                        weight: (!uniform.contains(&q)).then(|| e.weight.clone()),
                    });
                }
            }
        }
        doc
    }
}

/// Parses and builds in one step. Syntax problems are reported as
/// [`Error::InvalidParameter`]; use [`parse`] to tell them apart.
pub fn automaton_from_text(text: &str) -> Result<WeightedAutomaton> {
    parse(text).map_err(|e| Error::InvalidParameter(e.to_string()))?.to_automaton()
}

pub fn automaton_to_text(automaton: &WeightedAutomaton) -> String {
    serialize(&AutomatonDocument::from_automaton(automaton))
}
