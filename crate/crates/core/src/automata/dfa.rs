use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::symbol::{Alphabet, Symbol};

pub type StateId = usize;

/// Complete deterministic automaton. States are `0..num_states`; the
/// transition table is stored row-major by state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    names: Vec<String>,
    start: StateId,
    accepting: Vec<bool>,
    delta: Vec<StateId>,
}

impl Dfa {
    /// Builds a DFA from a full table. `delta[q * |Σ| + a]` is the successor.
    pub fn from_table(
        alphabet: Alphabet,
        start: StateId,
        accepting: Vec<bool>,
        delta: Vec<StateId>,
    ) -> Result<Self> {
        let n = accepting.len();
        let names = (0..n).map(|i| i.to_string()).collect();
        Self::with_names(alphabet, names, start, accepting, delta)
    }

    pub fn with_names(
        alphabet: Alphabet,
        names: Vec<String>,
        start: StateId,
        accepting: Vec<bool>,
        delta: Vec<StateId>,
    ) -> Result<Self> {
        let n = accepting.len();
        if n == 0 || start >= n {
            return Err(Error::InvalidAutomaton("start state out of range".into()));
        }
        if names.len() != n {
            return Err(Error::InvalidAutomaton("one name per state required".into()));
        }
        if delta.len() != n * alphabet.len() || delta.iter().any(|&q| q >= n) {
            return Err(Error::InvalidAutomaton("transition table is not total".into()));
        }
        Ok(Dfa { alphabet, names, start, accepting, delta })
    }

    /// Builds a DFA from a partial transition list, completing it with a
    /// sink state when some `(state, symbol)` pair is missing.
    pub fn from_partial(
        alphabet: Alphabet,
        num_states: usize,
        start: StateId,
        accepting: &[StateId],
        transitions: impl IntoIterator<Item = (StateId, usize, StateId)>,
    ) -> Result<Self> {
        let names = (0..num_states).map(|i| i.to_string()).collect();
        Self::from_partial_named(alphabet, names, start, accepting, transitions)
    }

    pub fn from_partial_named(
        alphabet: Alphabet,
        mut names: Vec<String>,
        start: StateId,
        accepting: &[StateId],
        transitions: impl IntoIterator<Item = (StateId, usize, StateId)>,
    ) -> Result<Self> {
        let n = names.len();
        let k = alphabet.len();
        let mut delta = vec![usize::MAX; n * k];
        for (from, sym, to) in transitions {
            if from >= n || to >= n || sym >= k {
                return Err(Error::InvalidAutomaton("transition out of range".into()));
            }
            let slot = &mut delta[from * k + sym];
            if *slot != usize::MAX && *slot != to {
                return Err(Error::InvalidAutomaton(format!(
                    "two transitions from {} on {}",
                    names[from],
                    alphabet.symbol(sym)
                )));
            }
            *slot = to;
        }
        let mut acc = vec![false; n];
        for &q in accepting {
            if q >= n {
                return Err(Error::InvalidAutomaton("accepting state out of range".into()));
            }
            acc[q] = true;
        }
        if delta.contains(&usize::MAX) {
            let sink = n;
            let mut sink_name = "sink".to_string();
            while names.contains(&sink_name) {
                sink_name.push('_');
            }
            names.push(sink_name);
            acc.push(false);
            for slot in delta.iter_mut() {
                if *slot == usize::MAX {
                    *slot = sink;
                }
            }
            delta.extend(std::iter::repeat(sink).take(k));
        }
        Self::with_names(alphabet, names, start, acc, delta)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q]
    }

    pub fn accepting(&self) -> &[bool] {
        &self.accepting
    }

    #[inline]
    pub fn next(&self, q: StateId, sym: usize) -> StateId {
        self.delta[q * self.alphabet.len() + sym]
    }

    pub fn table(&self) -> &[StateId] {
        &self.delta
    }

    pub fn run(&self, from: StateId, w: &[usize]) -> StateId {
        w.iter().fold(from, |q, &a| self.next(q, a))
    }

    pub fn accepts_indices(&self, w: &[usize]) -> bool {
        self.accepting[self.run(self.start, w)]
    }

    /// Membership; a symbol outside the alphabet means rejection.
    pub fn accepts(&self, w: &[Symbol]) -> bool {
        match self.alphabet.encode(w) {
            Ok(idx) => self.accepts_indices(&idx),
            Err(_) => false,
        }
    }

    pub fn accepts_atoms(&self, w: &[String]) -> bool {
        match self.alphabet.encode_atoms(w) {
            Ok(idx) => self.accepts_indices(&idx),
            Err(_) => false,
        }
    }

    /// States reachable from the start state.
    pub fn reachable(&self) -> Vec<bool> {
        let k = self.alphabet.len();
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::from([self.start]);
        seen[self.start] = true;
        while let Some(q) = queue.pop_front() {
            for a in 0..k {
                let r = self.next(q, a);
                if !seen[r] {
                    seen[r] = true;
                    queue.push_back(r);
                }
            }
        }
        seen
    }

    /// States from which an accepting state is reachable.
    pub fn coreachable(&self) -> Vec<bool> {
        let n = self.num_states();
        let k = self.alphabet.len();
        let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for q in 0..n {
            for a in 0..k {
                preds[self.next(q, a)].push(q);
            }
        }
        let mut live = self.accepting.clone();
        let mut stack: Vec<StateId> = (0..n).filter(|&q| live[q]).collect();
        while let Some(q) = stack.pop() {
            for &p in &preds[q] {
                if !live[p] {
                    live[p] = true;
                    stack.push(p);
                }
            }
        }
        live
    }

    /// Same language over a different alphabet: symbols missing from `self`
    /// lead to a rejecting sink, symbols missing from `target` are dropped.
    pub fn with_alphabet(&self, target: &Alphabet) -> Result<Dfa> {
        let n = self.num_states();
        let sink = n;
        let k = target.len();
        let map: Vec<Option<usize>> = target
            .symbols()
            .iter()
            .map(|s| self.alphabet.index_of(s))
            .collect();
        let mut delta = Vec::with_capacity((n + 1) * k);
        for q in 0..n {
            for m in &map {
                delta.push(m.map_or(sink, |a| self.next(q, a)));
            }
        }
        delta.extend(std::iter::repeat(sink).take(k));
        let mut accepting = self.accepting.clone();
        accepting.push(false);
        Dfa::from_table(target.clone(), self.start, accepting, delta)
    }

    pub fn to_nfa(&self) -> super::Nfa {
        let mut n = super::Nfa::new(self.alphabet.clone(), self.num_states());
        n.add_start(self.start);
        for q in 0..self.num_states() {
            if self.accepting[q] {
                n.set_accepting(q, true);
            }
            for a in 0..self.alphabet.len() {
                n.add_transition(q, a, self.next(q, a));
            }
        }
        n
    }
}
