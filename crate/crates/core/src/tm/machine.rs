use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::automata::json::{parse, render};
use crate::error::{Error, Result};
use crate::symbol::{BLANK, LEND, PAD};

/// Tape index of the left-end marker.
pub const LEND_SYM: usize = 0;
/// Tape index of the blank.
pub const BLANK_SYM: usize = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dir {
    L,
    R,
}

impl fmt::Display for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dir::L => "L",
            Dir::R => "R",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Action {
    pub to: usize,
    pub write: usize,
    pub dir: Dir,
}

/// A one-tape machine whose tape starts as `LEND x BLANK BLANK ...` with the
/// head on the marker, and whose output is read off the same cells.
///
/// Tape symbols are indices into `tape_alphabet`, which always starts with
/// `#LEND` and `#BLANK`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TuringMachine {
    states: Vec<String>,
    input_alphabet: Vec<String>,
    output_alphabet: Vec<String>,
    tape_alphabet: Vec<String>,
    start: usize,
    accepting: Vec<bool>,
    delta: Vec<Vec<Action>>,
    tape_index: HashMap<String, usize>,
}

/// Plain description used to build a machine.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MachineSpec {
    pub states: Vec<String>,
    pub input_alphabet: Vec<String>,
    pub output_alphabet: Option<Vec<String>>,
    /// Work symbols besides the input symbols and the two reserved ones.
    pub tape_alphabet: Vec<String>,
    pub start: String,
    pub accepting: Vec<String>,
    pub transitions: Vec<(String, String, String, String, Dir)>,
}

impl TuringMachine {
    pub fn new(spec: MachineSpec) -> Result<Self> {
        let mut tape_alphabet = vec![LEND.to_string(), BLANK.to_string()];
        let all = spec
            .input_alphabet
            .iter()
            .chain(spec.output_alphabet.iter().flatten())
            .chain(&spec.tape_alphabet);
        for t in all {
            if t.is_empty() || t == PAD {
                return Err(Error::InvalidMachine(format!("bad tape symbol {t:?}")));
            }
            if !tape_alphabet.contains(t) {
                tape_alphabet.push(t.clone());
            }
        }
        for t in spec.input_alphabet.iter().chain(spec.output_alphabet.iter().flatten()) {
            if t == LEND || t == BLANK {
                return Err(Error::ReservedToken(t.clone()));
            }
        }
        let tape_index: HashMap<String, usize> =
            tape_alphabet.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        let mut state_index = HashMap::new();
        for (i, s) in spec.states.iter().enumerate() {
            if state_index.insert(s.as_str(), i).is_some() {
                return Err(Error::InvalidMachine(format!("duplicate state {s:?}")));
            }
        }
        let state = |s: &str| {
            state_index.get(s).copied().ok_or_else(|| Error::UnknownState(s.to_string()))
        };
        let sym = |s: &str| {
            tape_index.get(s).copied().ok_or_else(|| Error::UnknownSymbol(s.to_string()))
        };
        let start = state(&spec.start)?;
        let mut accepting = vec![false; spec.states.len()];
        for a in &spec.accepting {
            accepting[state(a)?] = true;
        }
        let k = tape_alphabet.len();
        let mut delta: Vec<Vec<Action>> = vec![Vec::new(); spec.states.len() * k];
        for (from, read, to, write, dir) in &spec.transitions {
            let (p, a) = (state(from)?, sym(read)?);
            let act = Action { to: state(to)?, write: sym(write)?, dir: *dir };
            if accepting[p] {
                return Err(Error::InvalidMachine(format!("accepting state {from} has a transition")));
            }
            if a == LEND_SYM && (act.write != LEND_SYM || act.dir != Dir::R) {
                return Err(Error::InvalidMachine(format!(
                    "transition from {from} on {LEND} must write {LEND} and move R"
                )));
            }
            if a != LEND_SYM && act.write == LEND_SYM {
                return Err(Error::InvalidMachine(format!("transition from {from} writes {LEND}")));
            }
            let slot = &mut delta[p * k + a];
            if !slot.contains(&act) {
                slot.push(act);
                slot.sort();
            }
        }
        let output_alphabet = spec.output_alphabet.unwrap_or_else(|| spec.input_alphabet.clone());
        Ok(TuringMachine {
            states: spec.states,
            input_alphabet: spec.input_alphabet,
            output_alphabet,
            tape_alphabet,
            start,
            accepting,
            delta,
            tape_index,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn input_alphabet(&self) -> &[String] {
        &self.input_alphabet
    }

    pub fn output_alphabet(&self) -> &[String] {
        &self.output_alphabet
    }

    pub fn tape_alphabet(&self) -> &[String] {
        &self.tape_alphabet
    }

    pub fn tape_symbol(&self, t: &str) -> Option<usize> {
        self.tape_index.get(t).copied()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn actions(&self, q: usize, a: usize) -> &[Action] {
        &self.delta[q * self.tape_alphabet.len() + a]
    }

    pub fn is_deterministic(&self) -> bool {
        self.delta.iter().all(|v| v.len() <= 1)
    }

    /// First `(state, symbol)` with more than one action.
    pub fn nondeterminism_witness(&self) -> Option<Error> {
        let k = self.tape_alphabet.len();
        self.delta.iter().enumerate().find(|(_, v)| v.len() > 1).map(|(i, v)| {
            Error::Nondeterministic {
                state: self.states[i / k].clone(),
                symbol: self.tape_alphabet[i % k].clone(),
                count: v.len(),
            }
        })
    }

    pub fn num_transitions(&self) -> usize {
        self.delta.iter().map(Vec::len).sum()
    }

    /// Encodes an input word as tape symbols.
    pub fn encode_input(&self, x: &[String]) -> Result<Vec<usize>> {
        x.iter()
            .map(|t| {
                if self.input_alphabet.contains(t) {
                    Ok(self.tape_index[t])
                } else {
                    Err(Error::UnknownSymbol(t.clone()))
                }
            })
            .collect()
    }

    pub fn to_spec(&self) -> MachineSpec {
        let k = self.tape_alphabet.len();
        let mut transitions = Vec::new();
        for (i, acts) in self.delta.iter().enumerate() {
            for a in acts {
                transitions.push((
                    self.states[i / k].clone(),
                    self.tape_alphabet[i % k].clone(),
                    self.states[a.to].clone(),
                    self.tape_alphabet[a.write].clone(),
                    a.dir,
                ));
            }
        }
        let extra = self.tape_alphabet[2..]
            .iter()
            .filter(|t| !self.input_alphabet.contains(t) && !self.output_alphabet.contains(t))
            .cloned()
            .collect();
        MachineSpec {
            states: self.states.clone(),
            input_alphabet: self.input_alphabet.clone(),
            output_alphabet: (self.output_alphabet != self.input_alphabet)
                .then(|| self.output_alphabet.clone()),
            tape_alphabet: extra,
            start: self.states[self.start].clone(),
            accepting: (0..self.states.len())
                .filter(|&q| self.accepting[q])
                .map(|q| self.states[q].clone())
                .collect(),
            transitions,
        }
    }

    pub fn to_json(&self) -> MachineJson {
        let spec = self.to_spec();
        MachineJson {
            states: spec.states,
            input_alphabet: spec.input_alphabet,
            output_alphabet: spec.output_alphabet,
            tape_alphabet: self.tape_alphabet.clone(),
            start: spec.start,
            accepting: spec.accepting,
            transitions: spec
                .transitions
                .into_iter()
                .map(|(from, read, to, write, dir)| TransitionJson { from, read, to, write, dir })
                .collect(),
        }
    }

    pub fn from_json(j: MachineJson) -> Result<Self> {
        let reserved = |t: &String| t == LEND || t == BLANK;
        for t in &j.input_alphabet {
            if !j.tape_alphabet.contains(t) {
                return Err(Error::InvalidMachine(format!("input symbol {t} missing from tape alphabet")));
            }
        }
        Self::new(MachineSpec {
            states: j.states,
            input_alphabet: j.input_alphabet,
            output_alphabet: j.output_alphabet,
            tape_alphabet: j.tape_alphabet.into_iter().filter(|t| !reserved(t)).collect(),
            start: j.start,
            accepting: j.accepting,
            transitions: j
                .transitions
                .into_iter()
                .map(|t| (t.from, t.read, t.to, t.write, t.dir))
                .collect(),
        })
    }

    pub fn to_json_string(&self) -> String {
        render(&self.to_json())
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Self::from_json(parse(text)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionJson {
    pub from: String,
    pub read: String,
    pub to: String,
    pub write: String,
    pub dir: Dir,
}

/// JSON machine format. `output_alphabet` is optional and defaults to the
/// input alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MachineJson {
    pub states: Vec<String>,
    pub input_alphabet: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_alphabet: Option<Vec<String>>,
    pub tape_alphabet: Vec<String>,
    pub start: String,
    pub accepting: Vec<String>,
    pub transitions: Vec<TransitionJson>,
}
