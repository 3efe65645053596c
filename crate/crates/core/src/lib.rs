//! Probabilistic weighted automata over infinite words.
//!
//! An automaton reads an ultimately periodic word `u·v^ω`; each run yields
//! an infinite weight sequence that a value function (`Sup`, `LimSup`,
//! `LimInf`, `LimAvg`, `Disc`) turns into a number. The positive and
//! almost-sure semantics aggregate run values through the run measure, the
//! nondeterministic and universal ones through the best and worst run.
//!
//! Everything is exact: probabilities, weights and values are [`Rational`]s.
//!
//! ```
//! use qwa_core::{evaluate_word, fixture, FixtureName, LassoWord, Semantics, ValueFunction};
//! use qwa_core::rational::ratio;
//!
//! let low = fixture(FixtureName::Fig1Low).automaton;
//! let word = LassoWord::parse("", "send.ack").unwrap();
//! let v = evaluate_word(&low, &ValueFunction::LimAvg, Semantics::Positive, &word).unwrap();
//! assert_eq!(v, ratio(33, 20));
//! ```

pub mod automaton;
pub mod construct;
pub mod decide;
pub mod document;
pub mod error;
pub mod eval;
pub mod graph;
pub mod linalg;
pub mod markov;
pub mod oracle;
pub mod rational;
pub mod value;
pub mod word;

pub use automaton::{
    negate_weights, support_automaton, uniformize, AutomatonBuilder, Edge, Violation, WeightedAutomaton,
};
pub use decide::{classify, decide_disc, decide_sup, ClassificationEntry, DecisionProblem, ProblemKind, Status};
pub use error::{Error, Result};
pub use eval::{evaluate, evaluate_word, value_distribution, EvaluationRequest, ValueDistribution};
pub use markov::{build_product, ProductChain};
pub use oracle::{fixture, Fixture, FixtureName};
pub use rational::Rational;
pub use value::{Discount, Semantics, ValueFunction, ValueKind};
pub use word::LassoWord;
