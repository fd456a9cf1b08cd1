use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbol::{show, words_up_to, Word};

use super::machine::{Action, Dir, TuringMachine, BLANK_SYM, LEND_SYM};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub tape: Vec<usize>,
    pub head: usize,
    pub state: usize,
}

impl Configuration {
    pub fn initial(m: &TuringMachine, x: &[String]) -> Result<Self> {
        let mut tape = vec![LEND_SYM];
        tape.extend(m.encode_input(x)?);
        tape.push(BLANK_SYM);
        Ok(Configuration { tape, head: 0, state: m.start() })
    }

    pub fn read(&self) -> usize {
        self.tape[self.head]
    }

    fn apply(&self, a: &Action) -> Configuration {
        let mut next = self.clone();
        next.apply_in_place(a);
        next
    }

    fn apply_in_place(&mut self, a: &Action) {
        assert!(
            self.head > 0 || a.write == LEND_SYM,
            "left-end marker overwritten"
        );
        self.tape[self.head] = a.write;
        self.state = a.to;
        match a.dir {
            Dir::R => {
                self.head += 1;
                if self.head == self.tape.len() {
                    self.tape.push(BLANK_SYM);
                }
            }
            Dir::L => {
                assert!(self.head > 0, "head moved left of the marker");
                self.head -= 1;
            }
        }
    }

    /// Tape content strictly between the marker and the first blank.
    pub fn output(&self, m: &TuringMachine) -> Word {
        self.tape[1..]
            .iter()
            .take_while(|&&s| s != BLANK_SYM)
            .map(|&s| m.tape_alphabet()[s].clone())
            .collect()
    }
}

/// Successor configurations; empty when the machine halts.
pub fn step(m: &TuringMachine, c: &Configuration) -> Vec<Configuration> {
    if m.is_accepting(c.state) {
        return Vec::new();
    }
    m.actions(c.state, c.read()).iter().map(|a| c.apply(a)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Accepted,
    Rejected,
    Timeout,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: usize,
    pub state: String,
    pub head: usize,
    pub read: String,
    pub write: String,
    pub dir: Dir,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunResult {
    pub outcome: Outcome,
    pub output: Option<Word>,
    /// Executed transitions.
    pub steps: usize,
    /// Transitions executed at each cell.
    pub visits: Vec<usize>,
    /// Largest head position reached.
    pub excursion: usize,
    pub final_state: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceStep>>,
}

impl RunResult {
    pub fn accepted(&self) -> bool {
        self.outcome == Outcome::Accepted
    }

    pub fn max_visits(&self) -> usize {
        self.visits.iter().copied().max().unwrap_or(0)
    }

    fn finish(m: &TuringMachine, c: &Configuration, outcome: Outcome, steps: usize, visits: Vec<usize>, excursion: usize) -> Self {
        RunResult {
            outcome,
            output: (outcome == Outcome::Accepted).then(|| c.output(m)),
            steps,
            visits,
            excursion,
            final_state: m.states()[c.state].clone(),
            trace: None,
        }
    }
}

pub fn run_deterministic(m: &TuringMachine, x: &[String], budget: usize) -> Result<RunResult> {
    run_inner(m, x, budget, false)
}

/// Like [`run_deterministic`], recording every executed transition.
pub fn run_traced(m: &TuringMachine, x: &[String], budget: usize) -> Result<RunResult> {
    run_inner(m, x, budget, true)
}

fn run_inner(m: &TuringMachine, x: &[String], budget: usize, trace: bool) -> Result<RunResult> {
    if let Some(e) = m.nondeterminism_witness() {
        return Err(e);
    }
    let mut c = Configuration::initial(m, x)?;
    let mut visits = vec![0; c.tape.len()];
    let mut steps = 0;
    let mut excursion = 0;
    let mut log = trace.then(Vec::new);
    let outcome = loop {
        if m.is_accepting(c.state) {
            break Outcome::Accepted;
        }
        let Some(a) = m.actions(c.state, c.read()).first().copied() else {
            break Outcome::Rejected;
        };
        if steps == budget {
            break Outcome::Timeout;
        }
        if let Some(log) = log.as_mut() {
            log.push(TraceStep {
                step: steps,
                state: m.states()[c.state].clone(),
                head: c.head,
                read: m.tape_alphabet()[c.read()].clone(),
                write: m.tape_alphabet()[a.write].clone(),
                dir: a.dir,
            });
        }
        visits[c.head] += 1;
        steps += 1;
        c.apply_in_place(&a);
        if visits.len() < c.tape.len() {
            visits.resize(c.tape.len(), 0);
        }
        excursion = excursion.max(c.head);
    };
    let mut r = RunResult::finish(m, &c, outcome, steps, visits, excursion);
    r.trace = log;
    Ok(r)
}

/// All branches of a bounded nondeterministic search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NondetRuns {
    pub accepting: Vec<RunResult>,
    /// Some branch was still running when the budget ran out.
    pub timed_out: bool,
    /// Some branch halted without accepting.
    pub rejected: bool,
    pub max_steps: usize,
}

impl NondetRuns {
    pub fn output(&self) -> Option<&Word> {
        self.accepting.first().and_then(|r| r.output.as_ref())
    }
}

/// Exhaustive depth-first search with the budget as depth bound. Fails when
/// two accepting branches leave different outputs.
pub fn run_nondet(m: &TuringMachine, x: &[String], budget: usize) -> Result<NondetRuns> {
    struct Frame {
        c: Configuration,
        steps: usize,
        visits: Vec<usize>,
        excursion: usize,
    }
    let c = Configuration::initial(m, x)?;
    let visits = vec![0; c.tape.len()];
    let mut stack = vec![Frame { c, steps: 0, visits, excursion: 0 }];
    let mut out = NondetRuns { accepting: Vec::new(), timed_out: false, rejected: false, max_steps: 0 };
    while let Some(f) = stack.pop() {
        out.max_steps = out.max_steps.max(f.steps);
        if m.is_accepting(f.c.state) {
            let r = RunResult::finish(m, &f.c, Outcome::Accepted, f.steps, f.visits, f.excursion);
            if let Some(first) = out.accepting.first() {
                if first.output != r.output {
                    return Err(Error::OutputDisagreement {
                        input: show(x),
                        first: show(first.output.as_ref().unwrap()),
                        second: show(r.output.as_ref().unwrap()),
                    });
                }
            }
            out.accepting.push(r);
            continue;
        }
        let acts = m.actions(f.c.state, f.c.read());
        if acts.is_empty() {
            out.rejected = true;
            continue;
        }
        if f.steps == budget {
            out.timed_out = true;
            continue;
        }
        // reversed so that branches are explored in action order
        for a in acts.iter().rev() {
            let c = f.c.apply(a);
            let mut visits = f.visits.clone();
            visits[f.c.head] += 1;
            if visits.len() < c.tape.len() {
                visits.resize(c.tape.len(), 0);
            }
            let excursion = f.excursion.max(c.head);
            stack.push(Frame { c, steps: f.steps + 1, visits, excursion });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearTimeViolation {
    pub input: String,
    pub bound: usize,
    /// Steps taken, or `None` when a branch was still running at the bound.
    pub steps: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearTimeReport {
    pub rate: usize,
    pub maxlen: usize,
    pub inputs: usize,
    /// Largest `steps / (|x|+1)` seen among halting runs, rounded up.
    pub observed_rate: usize,
    pub violations: Vec<LinearTimeViolation>,
}

impl LinearTimeReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that every run on every input up to `maxlen` halts within
/// `rate·(|x|+1)` steps.
pub fn check_linear_time(m: &TuringMachine, rate: usize, maxlen: usize) -> Result<LinearTimeReport> {
    let mut report = LinearTimeReport { rate, maxlen, inputs: 0, observed_rate: 0, violations: Vec::new() };
    for x in words_up_to(m.input_alphabet(), maxlen) {
        let bound = rate * (x.len() + 1);
        report.inputs += 1;
        let (steps, timed_out) = if m.is_deterministic() {
            let r = run_deterministic(m, &x, bound)?;
            (r.steps, r.outcome == Outcome::Timeout)
        } else {
            let r = run_nondet(m, &x, bound)?;
            (r.max_steps, r.timed_out)
        };
        if timed_out {
            let over = if m.is_deterministic() {
                let r = run_deterministic(m, &x, bound.saturating_mul(64).max(1024))?;
                (r.outcome != Outcome::Timeout).then_some(r.steps)
            } else {
                None
            };
            report.violations.push(LinearTimeViolation { input: show(&x), bound, steps: over });
        } else {
            report.observed_rate = report.observed_rate.max(steps.div_ceil(x.len() + 1));
        }
    }
    Ok(report)
}

/// Internal step budget used where the caller gives none.
pub fn default_budget(len: usize) -> usize {
    100 * (len + 1)
}

/// Largest per-cell visit count over accepting runs on inputs up to
/// `maxlen`, or `None` when no input is accepted.
pub fn visit_bound_estimate(m: &TuringMachine, maxlen: usize) -> Result<Option<usize>> {
    let mut best: Option<usize> = None;
    for x in words_up_to(m.input_alphabet(), maxlen) {
        let budget = default_budget(x.len());
        let runs = if m.is_deterministic() {
            vec![run_deterministic(m, &x, budget)?]
        } else {
            run_nondet(m, &x, budget)?.accepting
        };
        for r in runs.iter().filter(|r| r.accepted()) {
            best = Some(best.unwrap_or(0).max(r.max_visits()));
        }
    }
    Ok(best)
}
