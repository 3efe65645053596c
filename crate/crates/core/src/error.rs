use thiserror::Error;

use crate::automaton::Violation;
use crate::decide::ClassificationEntry;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational {0:?} (expected \"k\" or \"p/q\")")]
pub struct ParseRationalError(pub String);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("letter {0:?} is not in the alphabet")]
    UnknownLetter(String),
    #[error("loop of a lasso word must be non-empty")]
    EmptyLoop,
    #[error("alphabets differ: {left:?} vs {right:?}")]
    AlphabetMismatch { left: Vec<String>, right: Vec<String> },
    #[error("not total: state {state:?} has no successor on {letter:?}")]
    NotTotal { state: String, letter: String },
    #[error("no initial state")]
    NoInitialState,
    #[error("initial distribution is not Dirac")]
    NonDiracInitial,
    #[error("discount factor {0} is not strictly between 0 and 1")]
    InvalidDiscount(String),
    #[error("value function {0} is not supported here")]
    UnsupportedValueFunction(String),
    #[error("automaton violates {} invariant(s): {}", .0.len(), display_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("state {0:?} is not declared")]
    UnknownState(String),
    #[error("node {0} has no outgoing choice")]
    DeadEnd(usize),
    #[error("singular linear system")]
    Singular,
    #[error("{} per the decidability table: {}", .0.status, .0.describe())]
    NotDecidable(ClassificationEntry),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

fn display_violations(violations: &[Violation]) -> String {
    violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
