//! Texts: infinite sequences listing exactly the words of a language.

use std::collections::{HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::automata::Dfa;
use crate::error::{Error, Result};
use crate::symbol::{show, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TextKind {
    /// Length-lex order, repeated forever for finite languages.
    Canonical,
    /// Stage `s` lists the first `s+1` canonical words, so every word recurs.
    Fat,
    /// The words of length at most `maxlen`, in a seeded random order,
    /// repeated forever.
    Permuted { maxlen: usize },
    /// A fixed prefix, then the canonical order with the prefix words left
    /// out of its first pass.
    Scripted { prefix: Vec<Word> },
}

/// Length-lex enumeration of a regular language.
#[derive(Clone, Debug)]
pub struct Enumerator {
    dfa: Dfa,
    tokens: Vec<String>,
    /// `reach[k][q]`: some word of length exactly `k` leads from `q` to
    /// acceptance.
    reach: Vec<Vec<bool>>,
    max_len: Option<usize>,
    len: usize,
    pass: usize,
    buffer: VecDeque<Word>,
}

impl Enumerator {
    pub fn new(dfa: &Dfa) -> Result<Self> {
        let tokens = dfa
            .alphabet()
            .tokens()
            .ok_or_else(|| Error::InvalidAutomaton("texts need a plain-token language".into()))?;
        if crate::automata::is_empty(dfa).is_none() {
            return Err(Error::EmptyLanguage);
        }
        let reach0 = (0..dfa.num_states()).map(|q| dfa.is_accepting(q)).collect();
        Ok(Enumerator {
            dfa: dfa.clone(),
            tokens,
            reach: vec![reach0],
            max_len: longest_word(dfa),
            len: 0,
            pass: 0,
            buffer: VecDeque::new(),
        })
    }

    /// Completed passes over a finite language.
    pub fn pass(&self) -> usize {
        self.pass
    }

    pub fn is_finite(&self) -> bool {
        self.max_len.is_some()
    }

    fn reach(&mut self, k: usize) -> &[bool] {
        while self.reach.len() <= k {
            let prev = self.reach.last().unwrap();
            let next = (0..self.dfa.num_states())
                .map(|q| (0..self.tokens.len()).any(|a| prev[self.dfa.next(q, a)]))
                .collect();
            self.reach.push(next);
        }
        &self.reach[k]
    }

    fn fill(&mut self, len: usize) {
        for k in 0..=len {
            self.reach(k);
        }
        let mut stack = vec![(self.dfa.start(), Vec::new())];
        let mut found = Vec::new();
        while let Some((q, w)) = stack.pop() {
            let rest = len - w.len();
            if !self.reach[rest][q] {
                continue;
            }
            if rest == 0 {
                found.push(w);
                continue;
            }
            for a in (0..self.tokens.len()).rev() {
                let mut v = w.clone();
                v.push(self.tokens[a].clone());
                stack.push((self.dfa.next(q, a), v));
            }
        }
        self.buffer.extend(found);
    }
}

impl Iterator for Enumerator {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        while self.buffer.is_empty() {
            if self.max_len.is_some_and(|m| self.len > m) {
                self.len = 0;
                self.pass += 1;
            }
            self.fill(self.len);
            self.len += 1;
        }
        self.buffer.pop_front()
    }
}

/// Length of the longest accepted word, `None` when there is no bound.
fn longest_word(d: &Dfa) -> Option<usize> {
    let reach = d.reachable();
    let co = d.coreachable();
    let useful: Vec<bool> = reach.iter().zip(&co).map(|(a, b)| *a && *b).collect();
    let k = d.alphabet().len();
    // longest path from q to acceptance over useful states; a cycle means unbounded
    fn visit(d: &Dfa, q: usize, k: usize, useful: &[bool], memo: &mut [Option<Option<usize>>], on: &mut [bool]) -> Option<usize> {
        if let Some(v) = memo[q] {
            return v;
        }
        if on[q] {
            return None;
        }
        on[q] = true;
        let mut best = d.is_accepting(q).then_some(0);
        let mut bounded = true;
        for a in 0..k {
            let r = d.next(q, a);
            if !useful[r] {
                continue;
            }
            match visit(d, r, k, useful, memo, on) {
                Some(l) => best = Some(best.map_or(l + 1, |b: usize| b.max(l + 1))),
                None => bounded = false,
            }
        }
        on[q] = false;
        let v = if bounded { best } else { None };
        memo[q] = Some(v);
        v
    }
    let mut memo = vec![None; d.num_states()];
    let mut on = vec![false; d.num_states()];
    if !useful[d.start()] {
        return Some(0);
    }
    visit(d, d.start(), k, &useful, &mut memo, &mut on)
}

/// An infinite text for a non-empty language.
#[derive(Clone, Debug)]
pub struct Text {
    kind: TextKind,
    seed: u64,
    canonical: Enumerator,
    /// Canonical words produced so far, for the fat text.
    seen: Vec<Word>,
    stage: usize,
    pos: usize,
    order: Vec<Word>,
    skip: HashSet<Word>,
}

impl Text {
    pub fn new(kind: TextKind, language: &Dfa, seed: u64) -> Result<Self> {
        let canonical = Enumerator::new(language)?;
        let mut order = Vec::new();
        let mut skip = HashSet::new();
        match &kind {
            TextKind::Permuted { maxlen } => {
                let mut e = Enumerator::new(language)?;
                order = std::iter::from_fn(|| e.next().filter(|w| w.len() <= *maxlen && e.pass() == 0))
                    .collect();
                if order.is_empty() {
                    return Err(Error::EmptyLanguage);
                }
                order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            }
            TextKind::Scripted { prefix } => {
                for w in prefix {
                    if !language.accepts_atoms(w) {
                        return Err(Error::WordNotInLanguage(show(w)));
                    }
                }
                order = prefix.clone();
                skip = prefix.iter().cloned().collect();
            }
            _ => {}
        }
        Ok(Text { kind, seed, canonical, seen: Vec::new(), stage: 0, pos: 0, order, skip })
    }

    pub fn kind(&self) -> &TextKind {
        &self.kind
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn canonical_at(&mut self, i: usize) -> Word {
        while self.seen.len() <= i {
            let w = self.canonical.next().expect("texts are infinite");
            self.seen.push(w);
        }
        self.seen[i].clone()
    }
}

impl Iterator for Text {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        match &self.kind {
            TextKind::Canonical => self.canonical.next(),
            TextKind::Fat => {
                let w = self.canonical_at(self.pos);
                if self.pos == self.stage {
                    self.stage += 1;
                    self.pos = 0;
                } else {
                    self.pos += 1;
                }
                Some(w)
            }
            TextKind::Permuted { .. } => {
                let w = self.order[self.pos % self.order.len()].clone();
                self.pos += 1;
                Some(w)
            }
            TextKind::Scripted { .. } => {
                if self.pos < self.order.len() {
                    self.pos += 1;
                    return Some(self.order[self.pos - 1].clone());
                }
                loop {
                    let first_pass = self.canonical.pass() == 0;
                    let w = self.canonical.next()?;
                    if !(first_pass && self.skip.contains(&w)) {
                        return Some(w);
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::build;
    use crate::symbol::{strings, word, Alphabet, Symbol};

    fn binary_all() -> Dfa {
        build::explore_dfa(&Alphabet::atoms(&strings(&["0", "1"])).unwrap(), (), |_| true, |_, _| Some(()))
    }

    fn finite(words: &[&str], tokens: &[&str]) -> Dfa {
        let ws: Vec<Word> = words.iter().map(|w| word(w)).collect();
        build::explore_dfa(&Alphabet::atoms(&strings(tokens)).unwrap(), Vec::<String>::new(), move |p| ws.contains(p), |p, s| {
            let Symbol::Atom(t) = s else { return None };
            let mut q = p.clone();
            q.push(t.clone());
            (q.len() <= 4).then_some(q)
        })
    }

    fn take(t: Text, n: usize) -> Vec<String> {
        t.take(n).map(|w| show(&w)).collect()
    }

    #[test]
    fn canonical_order() {
        let t = Text::new(TextKind::Canonical, &binary_all(), 0).unwrap();
        assert_eq!(take(t, 7), ["", "0", "1", "00", "01", "10", "11"]);
    }

    #[test]
    fn finite_languages_cycle() {
        let t = Text::new(TextKind::Canonical, &finite(&["1", "00"], &["0", "1"]), 0).unwrap();
        assert_eq!(take(t, 5), ["1", "00", "1", "00", "1"]);
        let t = Text::new(TextKind::Fat, &finite(&["a"], &["a"]), 0).unwrap();
        assert_eq!(take(t, 3), ["a", "a", "a"]);
    }

    #[test]
    fn fat_repeats_prefixes() {
        let t = Text::new(TextKind::Fat, &binary_all(), 0).unwrap();
        assert_eq!(take(t, 6), ["", "", "0", "", "0", "1"]);
    }

    #[test]
    fn empty_language_has_no_text() {
        let empty = finite(&[], &["0"]);
        assert_eq!(Text::new(TextKind::Canonical, &empty, 0).unwrap_err(), Error::EmptyLanguage);
    }

    #[test]
    fn scripted_prefix_then_rest_once() {
        let kind = TextKind::Scripted { prefix: vec![word("0"), word("")] };
        let t = Text::new(kind, &binary_all(), 0).unwrap();
        assert_eq!(take(t, 5), ["0", "", "1", "00", "01"]);
        let bad = TextKind::Scripted { prefix: vec![word("2")] };
        assert!(Text::new(bad, &binary_all(), 0).is_err());
    }

    #[test]
    fn permuted_is_seeded() {
        let k = TextKind::Permuted { maxlen: 2 };
        let a = take(Text::new(k.clone(), &binary_all(), 3).unwrap(), 14);
        let b = take(Text::new(k, &binary_all(), 3).unwrap(), 14);
        assert_eq!(a, b);
        let mut first: Vec<_> = a[..7].to_vec();
        first.sort();
        assert_eq!(first, ["", "0", "00", "01", "1", "10", "11"]);
        assert_eq!(a[..7], a[7..]);
    }
}
