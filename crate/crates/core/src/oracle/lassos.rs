//! Exhaustive enumeration of short lasso words.

use crate::automaton::Alphabet;
use crate::word::LassoWord;

/// Every `u·v^ω` with `|u| ≤ max_prefix` and `1 ≤ |v| ≤ max_loop`, once
/// each, ordered by `|u| + |v|`, then `|u|`, then letters (alphabet order).
pub fn enumerate_lassos(alphabet: &Alphabet, max_prefix: usize, max_loop: usize) -> Vec<LassoWord> {
    let mut out = Vec::new();
    if alphabet.is_empty() {
        return out;
    }
    for total in 1..=max_prefix + max_loop {
        for plen in 0..=max_prefix.min(total - 1) {
            let llen = total - plen;
            if llen > max_loop {
                continue;
            }
            for u in words(alphabet, plen) {
                for v in words(alphabet, llen) {
                    out.push(LassoWord::new(u.clone(), v).expect("loop is non-empty"));
                }
            }
        }
    }
    out
}

/// All words of length `len`, lexicographically.
fn words(alphabet: &Alphabet, len: usize) -> Vec<Vec<String>> {
    let mut acc: Vec<Vec<String>> = vec![Vec::new()];
    for _ in 0..len {
        acc = acc
            .into_iter()
            .flat_map(|w| {
                alphabet.letters().iter().map(move |l| {
                    let mut next = w.clone();
                    next.push(l.clone());
                    next
                })
            })
            .collect();
    }
    acc
}
