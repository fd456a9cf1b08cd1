//! Compiling an automatic function into a deterministic, linear-time,
//! position-faithful one-tape machine.
//!
//! The machine sweeps right once, replacing every cell by the input symbol
//! annotated with a mark per automaton state: `+` when exactly one output
//! prefix drives the graph automaton there, `*` when several do, `-` when
//! none does. As soon as the next mark vector would carry `+` at the
//! accepting state, it turns and sweeps left, following the unique
//! `+`-marked path backwards and writing the output symbols.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::autofn::AutomaticFunction;
use crate::automata::{build, Dfa, StateId};
use crate::error::{Error, Result};
use crate::symbol::{show, words_up_to, Alphabet, Symbol, Word, BLANK, LEND, PAD};
use crate::tm::{run_deterministic, Dir, MachineSpec, Outcome, TuringMachine};

/// Graph automaton over the convolution alphabet extended by `(PAD,PAD)`,
/// accepting exactly `conv(x, f(x))·(PAD,PAD)`. Its only accepting state is
/// entered by that final symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreparedGraph {
    pub dfa: Dfa,
    pub accept: StateId,
    /// States from which `accept` is reachable; marks are kept for these only.
    pub useful: Vec<StateId>,
}

pub fn prepare(f: &AutomaticFunction) -> Result<PreparedGraph> {
    let g = f.graph();
    let tracks = [f.input_alphabet().to_vec(), f.output_alphabet().to_vec()];
    let al = Alphabet::conv_with_full_pad(&tracks)?;
    #[derive(Clone, PartialEq, Eq, Hash)]
    enum S {
        Q(StateId),
        Final,
    }
    let dfa = build::explore_dfa(&al, S::Q(g.start()), |s| *s == S::Final, |s, sym| match s {
        S::Q(q) if sym.is_all_pad() => g.is_accepting(*q).then_some(S::Final),
        S::Q(q) => Some(S::Q(g.next(*q, g.alphabet().index_of(sym).unwrap()))),
        S::Final => None,
    });
    let accept = (0..dfa.num_states())
        .find(|&q| dfa.is_accepting(q))
        .unwrap_or(usize::MAX);
    let live = dfa.coreachable();
    let useful = (0..dfa.num_states()).filter(|&q| live[q]).collect();
    Ok(PreparedGraph { dfa, accept, useful })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Mark {
    Minus,
    Plus,
    Star,
}

impl Mark {
    fn glyph(self) -> char {
        match self {
            Mark::Minus => '-',
            Mark::Plus => '+',
            Mark::Star => '*',
        }
    }
}

type Marks = Vec<Mark>;

struct Marker<'a> {
    p: &'a PreparedGraph,
    slot: HashMap<StateId, usize>,
    out_syms: Vec<Option<String>>,
}

impl<'a> Marker<'a> {
    fn new(p: &'a PreparedGraph, outputs: &[String]) -> Self {
        let slot = p.useful.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        let out_syms = outputs.iter().cloned().map(Some).chain(std::iter::once(None)).collect();
        Marker { p, slot, out_syms }
    }

    fn initial(&self) -> Marks {
        let mut v = vec![Mark::Minus; self.p.useful.len()];
        if let Some(&i) = self.slot.get(&self.p.dfa.start()) {
            v[i] = Mark::Plus;
        }
        v
    }

    fn sym(&self, x: &Option<String>, y: &Option<String>) -> usize {
        self.p.dfa.alphabet().index_of(&Symbol::Tuple(vec![x.clone(), y.clone()])).unwrap()
    }

    /// Marks of the next cell given this cell's marks and input symbol.
    fn next(&self, v: &Marks, x: &Option<String>) -> Marks {
        let mut plus = vec![0usize; v.len()];
        let mut star = vec![false; v.len()];
        for (i, &m) in v.iter().enumerate() {
            if m == Mark::Minus {
                continue;
            }
            let d = self.p.useful[i];
            for y in &self.out_syms {
                let e = self.p.dfa.next(d, self.sym(x, y));
                if let Some(&j) = self.slot.get(&e) {
                    match m {
                        Mark::Plus => plus[j] += 1,
                        _ => star[j] = true,
                    }
                }
            }
        }
        (0..v.len())
            .map(|j| match (plus[j], star[j]) {
                (_, true) | (2.., _) => Mark::Star,
                (1, false) => Mark::Plus,
                _ => Mark::Minus,
            })
            .collect()
    }

    fn plus_at(&self, v: &Marks, q: StateId) -> bool {
        self.slot.get(&q).is_some_and(|&i| v[i] == Mark::Plus)
    }

    /// The unique `(d, y)` with `+` at `d` and `δ(d, (x, y)) = target`.
    fn back(&self, v: &Marks, x: &Option<String>, target: StateId) -> Option<(StateId, Option<String>)> {
        let mut hits = Vec::new();
        for (i, &m) in v.iter().enumerate() {
            if m != Mark::Plus {
                continue;
            }
            let d = self.p.useful[i];
            for y in &self.out_syms {
                if self.p.dfa.next(d, self.sym(x, y)) == target {
                    hits.push((d, y.clone()));
                }
            }
        }
        (hits.len() == 1).then(|| hits.pop().unwrap())
    }
}

fn marks_text(v: &Marks) -> String {
    v.iter().map(|m| m.glyph()).collect()
}

fn composite(x: &Option<String>, v: &Marks) -> String {
    format!("<{}|{}>", x.as_deref().unwrap_or(PAD), marks_text(v))
}

/// Builds the two-pass machine for `f`.
pub fn compile(f: &AutomaticFunction) -> Result<TuringMachine> {
    let p = prepare(f)?;
    let marker = Marker::new(&p, f.output_alphabet());
    let names = p.dfa.names();
    for t in f.input_alphabet().iter().chain(f.output_alphabet()) {
        if t.starts_with('<') {
            return Err(Error::InvalidMachine(format!("token {t:?} clashes with mark symbols")));
        }
    }
    let inputs: Vec<Option<String>> =
        f.input_alphabet().iter().cloned().map(Some).chain(std::iter::once(None)).collect();
    let tape_of = |x: &Option<String>| x.clone().unwrap_or_else(|| BLANK.to_string());
    let out_tape = |y: &Option<String>| y.clone().unwrap_or_else(|| BLANK.to_string());
    let fwd = |v: &Marks| format!("fwd[{}]", marks_text(v));
    let back = |d: StateId| format!("back[{}]", names[d]);

    let mut states = vec!["init".to_string(), "accept".to_string()];
    let mut transitions = Vec::new();
    let mut written: Vec<(Option<String>, Marks)> = Vec::new();
    let mut turn_targets: Vec<StateId> = Vec::new();

    // forward sweep over the reachable mark vectors
    let v0 = marker.initial();
    let mut seen: HashSet<Marks> = HashSet::new();
    let mut queue = VecDeque::new();
    transitions.push(("init".into(), LEND.into(), fwd(&v0), LEND.into(), Dir::R));
    seen.insert(v0.clone());
    queue.push_back(v0);
    while let Some(v) = queue.pop_front() {
        states.push(fwd(&v));
        for x in &inputs {
            let next = marker.next(&v, x);
            if x.is_none() && marker.plus_at(&next, p.accept) {
                // this cell holds the final (PAD,PAD) symbol: turn here
                let (d, _) = marker
                    .back(&v, x, p.accept)
                    .expect("a + at the accepting state has a unique + predecessor");
                transitions.push((fwd(&v), BLANK.into(), back(d), BLANK.into(), Dir::L));
                turn_targets.push(d);
                continue;
            }
            if next.iter().all(|&m| m == Mark::Minus) {
                continue;
            }
            transitions.push((fwd(&v), tape_of(x), fwd(&next), composite(x, &v), Dir::R));
            written.push((x.clone(), v.clone()));
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }

    // backward sweep over the composite symbols the forward sweep can write
    let mut back_states: Vec<StateId> = Vec::new();
    for (x, v) in &written {
        for &target in &p.useful {
            if let Some((d, y)) = marker.back(v, x, target) {
                transitions.push((back(target), composite(x, v), back(d), out_tape(&y), Dir::L));
                back_states.push(target);
                back_states.push(d);
            }
        }
    }
    back_states.extend(turn_targets);
    back_states.sort_unstable();
    back_states.dedup();
    for &d in &back_states {
        states.push(back(d));
        transitions.push((back(d), LEND.into(), "accept".into(), LEND.into(), Dir::R));
    }
    transitions.sort();
    transitions.dedup();
    let mut extra: Vec<String> = written.iter().map(|(x, v)| composite(x, v)).collect();
    extra.sort();
    extra.dedup();
    let output_alphabet =
        (f.output_alphabet() != f.input_alphabet()).then(|| f.output_alphabet().to_vec());
    TuringMachine::new(MachineSpec {
        states,
        input_alphabet: f.input_alphabet().to_vec(),
        output_alphabet,
        tape_alphabet: extra,
        start: "init".into(),
        accepting: vec!["accept".into()],
        transitions,
    })
}

/// Steps of the compiled machine are at most `2·(|x| + c + 2)`.
pub fn step_bound(input_len: usize, slack: usize) -> usize {
    2 * (input_len + slack + 2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompileMismatch {
    pub input: String,
    pub expected: Option<String>,
    pub got: Option<String>,
    pub steps: usize,
    pub bound: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompileReport {
    pub maxlen: usize,
    pub slack: usize,
    pub machine_states: usize,
    pub inputs: usize,
    pub max_steps: usize,
    /// Largest `steps - 2·(|x|+c+2)` seen; never positive on a pass.
    pub max_step_margin: i64,
    pub max_visits: usize,
    pub failures: Vec<CompileMismatch>,
}

impl CompileReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Compares the compiled machine against [`AutomaticFunction::evaluate`] on
/// every input up to `maxlen`, and checks the step bound.
pub fn verify_compile(f: &AutomaticFunction, maxlen: usize) -> Result<CompileReport> {
    let m = compile(f)?;
    verify_machine(f, &m, maxlen)
}

pub fn verify_machine(f: &AutomaticFunction, m: &TuringMachine, maxlen: usize) -> Result<CompileReport> {
    let mut report = CompileReport {
        maxlen,
        slack: f.slack(),
        machine_states: m.num_states(),
        inputs: 0,
        max_steps: 0,
        max_step_margin: i64::MIN,
        max_visits: 0,
        failures: Vec::new(),
    };
    for x in words_up_to(f.input_alphabet(), maxlen) {
        let bound = step_bound(x.len(), f.slack());
        let expected = f.evaluate(&x)?;
        // one extra step lets an overrun show up as a count, not a timeout
        let r = run_deterministic(m, &x, bound + 1)?;
        report.inputs += 1;
        report.max_steps = report.max_steps.max(r.steps);
        report.max_step_margin = report.max_step_margin.max(r.steps as i64 - bound as i64);
        report.max_visits = report.max_visits.max(r.max_visits());
        let got: Option<Word> = match r.outcome {
            Outcome::Accepted => r.output.clone(),
            _ => None,
        };
        if got != expected || r.steps > bound {
            report.failures.push(CompileMismatch {
                input: show(&x),
                expected: expected.map(|y| show(&y)),
                got: got.map(|y| show(&y)),
                steps: r.steps,
                bound,
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autofn::fixtures;
    use crate::symbol::{convolve_unchecked, strings, word};
    use crate::tm::visit_bound_estimate;

    #[test]
    fn prepared_graph_accepts_with_end_marker() {
        let f = fixtures::function("exchange").unwrap();
        let p = prepare(&f).unwrap();
        let mut w = convolve_unchecked(&[word("01"), word("10")]);
        assert!(!p.dfa.accepts(&w));
        w.push(Symbol::Tuple(vec![None, None]));
        assert!(p.dfa.accepts(&w));
        let mut bad = convolve_unchecked(&[word("01"), word("01")]);
        bad.push(Symbol::Tuple(vec![None, None]));
        assert!(!p.dfa.accepts(&bad));
    }

    #[test]
    fn empty_domain_prepares_to_nothing() {
        let al = Alphabet::conv(&[strings(&["0"]), strings(&["0"])]).unwrap();
        let g = Dfa::from_partial(al, 1, 0, &[], []).unwrap();
        let f = AutomaticFunction::new(&g).unwrap();
        let p = prepare(&f).unwrap();
        assert!(p.useful.is_empty());
        let m = compile(&f).unwrap();
        for x in ["", "0", "00"] {
            assert_eq!(run_deterministic(&m, &word(x), 20).unwrap().outcome, Outcome::Rejected);
        }
    }

    #[test]
    fn compiled_examples() {
        let run = |name: &str, x: &str| {
            let f = fixtures::function(name).unwrap();
            let m = compile(&f).unwrap();
            let r = run_deterministic(&m, &word(x), 1000).unwrap();
            assert!(r.steps <= step_bound(x.len(), f.slack()));
            r.output.map(|y| show(&y))
        };
        assert_eq!(run("exchange", "012").as_deref(), Some("210"));
        assert_eq!(run("identity", "").as_deref(), Some(""));
        assert_eq!(run("delete-first-0", "1001").as_deref(), Some("101"));
        assert_eq!(run("append-suffix", "b").as_deref(), Some("bab"));
    }

    #[test]
    fn compiled_machines_verify() {
        for name in fixtures::FUNCTIONS {
            let f = fixtures::function(name).unwrap();
            let m = compile(&f).unwrap();
            assert!(m.is_deterministic());
            let r = verify_machine(&f, &m, 6).unwrap();
            assert!(r.passed(), "{name}: {:?}", r.failures);
            assert!(visit_bound_estimate(&m, 5).unwrap().unwrap() <= 2);
        }
    }
}
