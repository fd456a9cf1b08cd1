//! JSON automaton format.
//!
//! ```json
//! { "alphabet": ["a", "b"], "states": ["q0", "q1"], "start": "q0",
//!   "accepting": ["q1"], "transitions": [{"from": "q0", "symbol": "a", "to": "q1"}] }
//! ```
//!
//! Convolution symbols are arrays with `null` for padding. `start` is a name
//! for a DFA and may be a list for an NFA. Saving is canonical: states in
//! numbering order, transitions ordered by state then symbol.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbol::{Alphabet, Symbol};

use super::{Dfa, Nfa, StateId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StartSpec {
    One(String),
    Many(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionJson {
    pub from: String,
    pub symbol: Symbol,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomatonJson {
    pub alphabet: Vec<Symbol>,
    pub states: Vec<String>,
    pub start: StartSpec,
    pub accepting: Vec<String>,
    pub transitions: Vec<TransitionJson>,
}

struct Resolved {
    alphabet: Alphabet,
    starts: Vec<StateId>,
    accepting: Vec<StateId>,
    edges: Vec<(StateId, usize, StateId)>,
}

impl AutomatonJson {
    fn resolve(&self) -> Result<Resolved> {
        let alphabet = Alphabet::new(self.alphabet.clone())?;
        let mut ids = HashMap::new();
        for (i, s) in self.states.iter().enumerate() {
            if ids.insert(s.as_str(), i).is_some() {
                return Err(Error::InvalidAutomaton(format!("duplicate state {s:?}")));
            }
        }
        let state = |s: &str| ids.get(s).copied().ok_or_else(|| Error::UnknownState(s.to_string()));
        let starts = match &self.start {
            StartSpec::One(s) => vec![state(s)?],
            StartSpec::Many(v) => v.iter().map(|s| state(s)).collect::<Result<_>>()?,
        };
        let accepting = self.accepting.iter().map(|s| state(s)).collect::<Result<_>>()?;
        let edges = self
            .transitions
            .iter()
            .map(|t| {
                let a = alphabet
                    .index_of(&t.symbol)
                    .ok_or_else(|| Error::UnknownSymbol(t.symbol.to_string()))?;
                Ok((state(&t.from)?, a, state(&t.to)?))
            })
            .collect::<Result<_>>()?;
        Ok(Resolved { alphabet, starts, accepting, edges })
    }

    pub fn to_dfa(&self) -> Result<Dfa> {
        let r = self.resolve()?;
        let start = match (&self.start, r.starts.as_slice()) {
            (StartSpec::One(_), &[s]) => s,
            _ => return Err(Error::InvalidAutomaton("a DFA needs exactly one start state".into())),
        };
        Dfa::from_partial_named(r.alphabet, self.states.clone(), start, &r.accepting, r.edges)
    }

    pub fn to_nfa(&self) -> Result<Nfa> {
        let r = self.resolve()?;
        let mut n = Nfa::new(r.alphabet, self.states.len());
        for s in r.starts {
            n.add_start(s);
        }
        for q in r.accepting {
            n.set_accepting(q, true);
        }
        for (p, a, q) in r.edges {
            n.add_transition(p, a, q);
        }
        Ok(n)
    }

    pub fn from_dfa(d: &Dfa) -> Self {
        let names = d.names();
        let mut transitions = Vec::with_capacity(d.table().len());
        for q in 0..d.num_states() {
            for (a, s) in d.alphabet().symbols().iter().enumerate() {
                transitions.push(TransitionJson {
                    from: names[q].clone(),
                    symbol: s.clone(),
                    to: names[d.next(q, a)].clone(),
                });
            }
        }
        AutomatonJson {
            alphabet: d.alphabet().symbols().to_vec(),
            states: names.to_vec(),
            start: StartSpec::One(names[d.start()].clone()),
            accepting: (0..d.num_states())
                .filter(|&q| d.is_accepting(q))
                .map(|q| names[q].clone())
                .collect(),
            transitions,
        }
    }

    pub fn from_nfa(n: &Nfa) -> Self {
        let name = |q: StateId| q.to_string();
        let mut transitions = Vec::new();
        for q in 0..n.num_states() {
            for (a, s) in n.alphabet().symbols().iter().enumerate() {
                for &r in n.successors(q, a) {
                    transitions.push(TransitionJson { from: name(q), symbol: s.clone(), to: name(r) });
                }
            }
        }
        AutomatonJson {
            alphabet: n.alphabet().symbols().to_vec(),
            states: (0..n.num_states()).map(name).collect(),
            start: StartSpec::Many(n.starts().iter().map(|&q| name(q)).collect()),
            accepting: (0..n.num_states())
                .filter(|&q| n.is_accepting(q))
                .map(name)
                .collect(),
            transitions,
        }
    }
}

/// Parses JSON text. Errors carry the line and column.
pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

/// Canonical pretty-printed JSON with a trailing newline.
pub fn render<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn dfa_from_str(text: &str) -> Result<Dfa> {
    parse::<AutomatonJson>(text)?.to_dfa()
}

pub fn dfa_to_string(d: &Dfa) -> String {
    render(&AutomatonJson::from_dfa(d))
}

pub fn nfa_from_str(text: &str) -> Result<Nfa> {
    parse::<AutomatonJson>(text)?.to_nfa()
}

pub fn nfa_to_string(n: &Nfa) -> String {
    render(&AutomatonJson::from_nfa(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dfa_round_trip_is_byte_exact() {
        let al = Alphabet::conv(&[vec!["0", "1"], vec!["a"]]).unwrap();
        let d = Dfa::from_partial(al, 2, 0, &[1], [(0, 0, 1), (1, 3, 1)]).unwrap();
        let s = dfa_to_string(&d);
        let back = dfa_from_str(&s).unwrap();
        assert_eq!(back, d);
        assert_eq!(dfa_to_string(&back), s);
        assert!(s.contains("null"));
    }

    #[test]
    fn nfa_round_trip_is_byte_exact() {
        let al = Alphabet::atoms(&["a", "b"]).unwrap();
        let mut n = Nfa::new(al, 2);
        n.add_start(0);
        n.add_start(1);
        n.add_transition(0, 1, 1);
        n.add_transition(0, 1, 0);
        n.set_accepting(1, true);
        let s = nfa_to_string(&n);
        let back = nfa_from_str(&s).unwrap();
        assert_eq!(back, n);
        assert_eq!(nfa_to_string(&back), s);
    }

    #[test]
    fn malformed_input_reports_position() {
        let err = dfa_from_str("{\"alphabet\": [\"a\",, }").unwrap_err();
        match err {
            Error::Format(msg) => assert!(msg.contains("line 1"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
        let err = dfa_from_str(
            r#"{"alphabet":["a"],"states":["p"],"start":"q","accepting":[],"transitions":[]}"#,
        )
        .unwrap_err();
        assert_eq!(err, Error::UnknownState("q".into()));
    }
}
