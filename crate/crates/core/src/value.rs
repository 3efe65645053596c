//! Value functions, semantics, and closed-form values of ultimately periodic
//! weight sequences.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, pow, Rational};

/// A discount factor `λ` with `0 < λ < 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Discount(Rational);

impl Discount {
    pub fn new(lambda: Rational) -> Result<Self> {
        if lambda > Rational::zero() && lambda < Rational::one() {
            Ok(Discount(lambda))
        } else {
            Err(Error::InvalidDiscount(format_rational(&lambda)))
        }
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ValueFunction {
    Sup,
    LimSup,
    LimInf,
    LimAvg,
    Disc(Discount),
}

impl ValueFunction {
    pub fn is_limit(&self) -> bool {
        matches!(self, ValueFunction::LimSup | ValueFunction::LimInf | ValueFunction::LimAvg)
    }

    pub fn kind(&self) -> ValueKind {
        match self {
            ValueFunction::Sup => ValueKind::Sup,
            ValueFunction::LimSup => ValueKind::LimSup,
            ValueFunction::LimInf => ValueKind::LimInf,
            ValueFunction::LimAvg => ValueKind::LimAvg,
            ValueFunction::Disc(_) => ValueKind::Disc,
        }
    }
}

impl fmt::Display for ValueFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueFunction::Disc(l) => write!(f, "Disc[{}]", format_rational(l.value())),
            other => write!(f, "{}", other.kind()),
        }
    }
}

/// [`ValueFunction`] without the discount factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ValueKind {
    Sup,
    LimSup,
    LimInf,
    LimAvg,
    Disc,
}

impl ValueKind {
    pub const ALL: [ValueKind; 5] =
        [ValueKind::Sup, ValueKind::LimSup, ValueKind::LimInf, ValueKind::LimAvg, ValueKind::Disc];
}

impl fmt::Display for ValueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ValueKind::Sup => "Sup",
            ValueKind::LimSup => "LimSup",
            ValueKind::LimInf => "LimInf",
            ValueKind::LimAvg => "LimAvg",
            ValueKind::Disc => "Disc",
        })
    }
}

impl FromStr for ValueKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sup" => Ok(ValueKind::Sup),
            "limsup" => Ok(ValueKind::LimSup),
            "liminf" => Ok(ValueKind::LimInf),
            "limavg" => Ok(ValueKind::LimAvg),
            "disc" => Ok(ValueKind::Disc),
            _ => Err(Error::InvalidParameter(format!("unknown value function {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Semantics {
    Positive,
    AlmostSure,
    Nondeterministic,
    Universal,
}

impl Semantics {
    pub const ALL: [Semantics; 4] =
        [Semantics::Positive, Semantics::AlmostSure, Semantics::Nondeterministic, Semantics::Universal];

    /// Prefix used in class acronyms (`PosLimSup`, `AsDisc`, ...).
    pub fn acronym(&self) -> &'static str {
        match self {
            Semantics::Positive => "Pos",
            Semantics::AlmostSure => "As",
            Semantics::Nondeterministic => "N",
            Semantics::Universal => "U",
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Semantics::Positive => "Positive",
            Semantics::AlmostSure => "AlmostSure",
            Semantics::Nondeterministic => "Nondeterministic",
            Semantics::Universal => "Universal",
        })
    }
}

impl FromStr for Semantics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pos" | "positive" => Ok(Semantics::Positive),
            "as" | "almostsure" | "almost-sure" => Ok(Semantics::AlmostSure),
            "nd" | "nondeterministic" => Ok(Semantics::Nondeterministic),
            "univ" | "universal" => Ok(Semantics::Universal),
            _ => Err(Error::InvalidParameter(format!("unknown semantics {s:?}"))),
        }
    }
}

/// The weight sequence `prefix · loop^ω` of a run on a lasso word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunSegmentWeights {
    prefix: Vec<Rational>,
    cycle: Vec<Rational>,
}

impl RunSegmentWeights {
    pub fn new(prefix: Vec<Rational>, cycle: Vec<Rational>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::EmptyLoop);
        }
        Ok(RunSegmentWeights { prefix, cycle })
    }

    pub fn prefix(&self) -> &[Rational] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[Rational] {
        &self.cycle
    }

    /// The `i`-th weight of the infinite sequence.
    pub fn at(&self, i: usize) -> &Rational {
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }
}

/// `Val(prefix · loop^ω)` in closed form.
pub fn periodic_value(valfn: &ValueFunction, weights: &RunSegmentWeights) -> Rational {
    let cycle = &weights.cycle;
    let cycle_max = || cycle.iter().max().expect("non-empty loop").clone();
    match valfn {
        ValueFunction::Sup => weights.prefix.iter().chain(cycle).max().expect("non-empty").clone(),
        ValueFunction::LimSup => cycle_max(),
        ValueFunction::LimInf => cycle.iter().min().expect("non-empty loop").clone(),
        ValueFunction::LimAvg => {
            let sum: Rational = cycle.iter().sum();
            sum / Rational::from_integer((cycle.len() as i64).into())
        }
        ValueFunction::Disc(discount) => {
            let lambda = discount.value();
            let mut factor = Rational::one();
            let mut head = Rational::zero();
            for w in &weights.prefix {
                head += &factor * w;
                factor *= lambda;
            }
            let mut tail = Rational::zero();
            let mut f = Rational::one();
            for w in cycle {
                tail += &f * w;
                f *= lambda;
            }
            head + factor * tail / (Rational::one() - pow(lambda, cycle.len()))
        }
    }
}
