//! The reference automata. State weights are carried by every outgoing
//! edge of the state.

use std::fmt;
use std::str::FromStr;

use crate::automaton::{AutomatonBuilder, WeightedAutomaton};
use crate::document::{automaton_from_text, automaton_to_text};
use crate::error::{Error, Result};
use crate::rational::int;
use crate::value::{Semantics, ValueKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FixtureName {
    Fig1Low,
    Fig1High,
    Fig2Lf,
    Fig3Li,
    Fig4Lz,
    DaCounter,
    DbCounter,
}

impl FixtureName {
    pub const ALL: [FixtureName; 7] = [
        FixtureName::Fig1Low,
        FixtureName::Fig1High,
        FixtureName::Fig2Lf,
        FixtureName::Fig3Li,
        FixtureName::Fig4Lz,
        FixtureName::DaCounter,
        FixtureName::DbCounter,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FixtureName::Fig1Low => "fig1_low",
            FixtureName::Fig1High => "fig1_high",
            FixtureName::Fig2Lf => "fig2_LF",
            FixtureName::Fig3Li => "fig3_LI",
            FixtureName::Fig4Lz => "fig4_Lz",
            FixtureName::DaCounter => "da_counter",
            FixtureName::DbCounter => "db_counter",
        }
    }

    /// The shipped `.qwa` file, for the five figure automata.
    pub fn shipped_document(&self) -> Option<&'static str> {
        match self {
            FixtureName::Fig1Low => Some(include_str!("../../fixtures/fig1_low.qwa")),
            FixtureName::Fig1High => Some(include_str!("../../fixtures/fig1_high.qwa")),
            FixtureName::Fig2Lf => Some(include_str!("../../fixtures/fig2.qwa")),
            FixtureName::Fig3Li => Some(include_str!("../../fixtures/fig3.qwa")),
            FixtureName::Fig4Lz => Some(include_str!("../../fixtures/fig4.qwa")),
            FixtureName::DaCounter | FixtureName::DbCounter => None,
        }
    }

    /// Document text: the shipped file, or a serialization.
    pub fn document(&self) -> String {
        match self.shipped_document() {
            Some(text) => text.to_string(),
            None => automaton_to_text(&fixture(*self).automaton),
        }
    }
}

impl fmt::Display for FixtureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FixtureName {
    type Err = Error;

    /// Accepts the full names (any case) and the short aliases
    /// `fig2`, `fig3`, `fig4`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        let alias = match lower.as_str() {
            "fig2" => Some(FixtureName::Fig2Lf),
            "fig3" => Some(FixtureName::Fig3Li),
            "fig4" => Some(FixtureName::Fig4Lz),
            _ => None,
        };
        alias
            .or_else(|| FixtureName::ALL.into_iter().find(|n| n.as_str().to_ascii_lowercase() == lower))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown fixture {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub name: FixtureName,
    pub automaton: WeightedAutomaton,
    pub intended_value: ValueKind,
    pub intended_semantics: Semantics,
}

pub fn fixture(name: FixtureName) -> Fixture {
    use Semantics::{AlmostSure, Positive};
    let automaton = match name.shipped_document() {
        Some(text) => automaton_from_text(text).expect("shipped fixture is valid"),
        None => counter(name == FixtureName::DaCounter),
    };
    let (intended_value, intended_semantics) = match name {
        FixtureName::Fig1Low | FixtureName::Fig1High => (ValueKind::LimAvg, Positive),
        FixtureName::Fig2Lf => (ValueKind::LimAvg, Positive),
        FixtureName::Fig3Li => (ValueKind::LimAvg, AlmostSure),
        FixtureName::Fig4Lz => (ValueKind::LimSup, Positive),
        FixtureName::DaCounter | FixtureName::DbCounter => (ValueKind::LimAvg, AlmostSure),
    };
    Fixture { name, automaton, intended_value, intended_semantics }
}

/// One state counting `a`s (or `b`s) with weight 1.
fn counter(count_a: bool) -> WeightedAutomaton {
    let (wa, wb) = if count_a { (1, 0) } else { (0, 1) };
    AutomatonBuilder::new(["a", "b"])
        .state("q")
        .initial("q", int(1))
        .edge("q", "a", "q", int(1), int(wa))
        .edge("q", "b", "q", int(1), int(wb))
        .build()
        .expect("counter automaton is valid")
}
