use std::collections::VecDeque;

use crate::symbol::{Alphabet, Symbol};

use super::StateId;

/// Nondeterministic automaton without ε-moves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Alphabet,
    start: Vec<StateId>,
    accepting: Vec<bool>,
    // successors of (q, a) at q * |Σ| + a, kept sorted
    delta: Vec<Vec<StateId>>,
}

impl Nfa {
    pub fn new(alphabet: Alphabet, num_states: usize) -> Self {
        let k = alphabet.len();
        Nfa {
            alphabet,
            start: Vec::new(),
            accepting: vec![false; num_states],
            delta: vec![Vec::new(); num_states * k],
        }
    }

    pub fn add_state(&mut self) -> StateId {
        let q = self.accepting.len();
        self.accepting.push(false);
        self.delta
            .extend(std::iter::repeat_with(Vec::new).take(self.alphabet.len()));
        q
    }

    pub fn add_start(&mut self, q: StateId) {
        if let Err(pos) = self.start.binary_search(&q) {
            self.start.insert(pos, q);
        }
    }

    pub fn set_accepting(&mut self, q: StateId, yes: bool) {
        self.accepting[q] = yes;
    }

    pub fn add_transition(&mut self, from: StateId, sym: usize, to: StateId) {
        let k = self.alphabet.len();
        let succ = &mut self.delta[from * k + sym];
        if let Err(pos) = succ.binary_search(&to) {
            succ.insert(pos, to);
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn starts(&self) -> &[StateId] {
        &self.start
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q]
    }

    pub fn successors(&self, q: StateId, sym: usize) -> &[StateId] {
        &self.delta[q * self.alphabet.len() + sym]
    }

    pub fn num_transitions(&self) -> usize {
        self.delta.iter().map(Vec::len).sum()
    }

    pub fn accepts_indices(&self, w: &[usize]) -> bool {
        let n = self.num_states();
        let mut cur = vec![false; n];
        for &q in &self.start {
            cur[q] = true;
        }
        for &a in w {
            let mut next = vec![false; n];
            for q in (0..n).filter(|&q| cur[q]) {
                for &r in self.successors(q, a) {
                    next[r] = true;
                }
            }
            cur = next;
        }
        (0..n).any(|q| cur[q] && self.accepting[q])
    }

    pub fn accepts(&self, w: &[Symbol]) -> bool {
        match self.alphabet.encode(w) {
            Ok(idx) => self.accepts_indices(&idx),
            Err(_) => false,
        }
    }

    /// States from which an accepting state is reachable.
    pub fn coreachable(&self) -> Vec<bool> {
        let n = self.num_states();
        let k = self.alphabet.len();
        let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for q in 0..n {
            for a in 0..k {
                for &r in self.successors(q, a) {
                    preds[r].push(q);
                }
            }
        }
        let mut live = self.accepting.clone();
        let mut queue: VecDeque<StateId> = (0..n).filter(|&q| live[q]).collect();
        while let Some(q) = queue.pop_front() {
            for &p in &preds[q] {
                if !live[p] {
                    live[p] = true;
                    queue.push_back(p);
                }
            }
        }
        live
    }
}
