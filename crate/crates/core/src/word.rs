//! Ultimately periodic infinite words `u·v^ω`.

use std::fmt;

use crate::automaton::Alphabet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LassoWord {
    prefix: Vec<String>,
    cycle: Vec<String>,
}

impl LassoWord {
    pub fn new<I, J, S, T>(prefix: I, cycle: J) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        J: IntoIterator<Item = T>,
        S: Into<String>,
        T: Into<String>,
    {
        let prefix: Vec<String> = prefix.into_iter().map(Into::into).collect();
        let cycle: Vec<String> = cycle.into_iter().map(Into::into).collect();
        if cycle.is_empty() {
            return Err(Error::EmptyLoop);
        }
        Ok(LassoWord { prefix, cycle })
    }

    /// `v^ω`.
    pub fn periodic<J, T>(cycle: J) -> Result<Self>
    where
        J: IntoIterator<Item = T>,
        T: Into<String>,
    {
        Self::new(Vec::<String>::new(), cycle)
    }

    /// Parses the `.`-separated syntax used on the command line: `"send.ack"`.
    /// An empty prefix string denotes the empty word.
    pub fn parse(prefix: &str, cycle: &str) -> Result<Self> {
        let split = |s: &str| -> Vec<String> {
            if s.is_empty() {
                Vec::new()
            } else {
                s.split('.').map(str::to_string).collect()
            }
        };
        Self::new(split(prefix), split(cycle))
    }

    pub fn prefix(&self) -> &[String] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[String] {
        &self.cycle
    }

    /// Letter at position `i` of the infinite word.
    pub fn letter_at(&self, i: usize) -> &str {
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Resolves letters against an alphabet.
    pub fn resolve(&self, alphabet: &Alphabet) -> Result<ResolvedWord> {
        let look = |l: &String| alphabet.index_of(l).ok_or_else(|| Error::UnknownLetter(l.clone()));
        Ok(ResolvedWord {
            prefix: self.prefix.iter().map(look).collect::<Result<_>>()?,
            cycle: self.cycle.iter().map(look).collect::<Result<_>>()?,
        })
    }

    /// Moves the first loop letter to the end of the prefix: same infinite word.
    pub fn rotated(&self) -> Self {
        let mut prefix = self.prefix.clone();
        prefix.push(self.cycle[0].clone());
        let mut cycle = self.cycle[1..].to_vec();
        cycle.push(self.cycle[0].clone());
        LassoWord { prefix, cycle }
    }

    /// `u·(v·v)^ω`: same infinite word.
    pub fn unrolled(&self) -> Self {
        let mut cycle = self.cycle.clone();
        cycle.extend(self.cycle.iter().cloned());
        LassoWord { prefix: self.prefix.clone(), cycle }
    }

    /// `(u·v)·v^ω`: same infinite word.
    pub fn shifted(&self) -> Self {
        let mut prefix = self.prefix.clone();
        prefix.extend(self.cycle.iter().cloned());
        LassoWord { prefix, cycle: self.cycle.clone() }
    }
}

impl fmt::Display for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.prefix.is_empty() {
            write!(f, "{}\u{b7}", self.prefix.join("."))?;
        }
        write!(f, "({})^\u{3c9}", self.cycle.join("."))
    }
}

/// A lasso word as letter indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResolvedWord {
    pub prefix: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl ResolvedWord {
    pub fn len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn letter(&self, position: usize) -> usize {
        if position < self.prefix.len() {
            self.prefix[position]
        } else {
            self.cycle[(position - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Position after `position` in the `|u| + |v|` position cycle.
    pub fn next_position(&self, position: usize) -> usize {
        if position + 1 < self.len() {
            position + 1
        } else {
            self.prefix.len()
        }
    }
}
