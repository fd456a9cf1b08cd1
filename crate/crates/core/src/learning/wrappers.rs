//! Learners driven by host code that keeps its state on a bounded Tape 0
//! record plus budgeted devices.

use std::collections::BTreeMap;

use super::device::{Queue, Snapshot, Stack, Tape};
use super::learner::{memory_len, AutomaticLearner, Memory};
use crate::error::Result;
use crate::symbol::Word;

/// What one cycle produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleOutput {
    pub hypothesis: Word,
    /// Steps per device this cycle; `tape0` is the base tape.
    pub steps: BTreeMap<String, usize>,
    /// Length of the Tape 0 record at the end of the cycle.
    pub scratch_len: usize,
    /// Data handed to the wrapped learner this cycle, in order.
    pub fed: Vec<Word>,
}

pub trait DeviceLearner {
    fn name(&self) -> String;
    /// Default steps per cycle per unit of `n + 1`.
    fn rate(&self) -> usize;
    /// Default allowance for the Tape 0 record beyond `n`.
    fn slack(&self) -> usize;
    fn cycle(&mut self, datum: &[String]) -> Result<CycleOutput>;
    fn snapshots(&self) -> Vec<Snapshot> {
        Vec::new()
    }
}

/// Cost of one scan of Tape 0 over a record of length `len` and back.
pub fn scan_cost(len: usize) -> usize {
    2 * (len + 1)
}

fn record_len(parts: &[&[String]], mem: &[Word]) -> usize {
    parts.iter().map(|p| p.len()).max().unwrap_or(0).max(memory_len(mem))
}

/// An automatic learner run directly on Tape 0.
pub struct Plain {
    m: AutomaticLearner,
    mem: Memory,
}

impl Plain {
    pub fn new(m: AutomaticLearner) -> Self {
        let mem = m.initial_memory();
        Plain { m, mem }
    }
}

impl DeviceLearner for Plain {
    fn name(&self) -> String {
        self.m.name().to_string()
    }

    fn rate(&self) -> usize {
        self.m.rate()
    }

    fn slack(&self) -> usize {
        self.m.memory_slack()
    }

    fn cycle(&mut self, datum: &[String]) -> Result<CycleOutput> {
        let cost = self.m.apply_cost(&self.mem, datum);
        let (mem, hyp) = self.m.apply(&self.mem, datum)?;
        self.mem = mem;
        Ok(CycleOutput {
            scratch_len: record_len(&[datum, &hyp], &self.mem),
            hypothesis: hyp,
            steps: BTreeMap::from([("tape0".to_string(), cost)]),
            fed: vec![datum.to_vec()],
        })
    }
}

/// Word storage used as an archive: last in, first out.
pub trait Archive: Default {
    const KIND: &'static str;
    fn put(&mut self, w: &[String]);
    fn take(&mut self) -> Option<Word>;
    fn is_empty(&self) -> bool;
    fn take_steps(&mut self) -> usize;
    fn snapshot(&self) -> Snapshot;
}

impl Archive for Tape {
    const KIND: &'static str = "tape";

    fn put(&mut self, w: &[String]) {
        self.append_word(w)
    }

    fn take(&mut self) -> Option<Word> {
        self.pop_last_word()
    }

    fn is_empty(&self) -> bool {
        Tape::is_empty(self)
    }

    fn take_steps(&mut self) -> usize {
        Tape::take_steps(self)
    }

    fn snapshot(&self) -> Snapshot {
        Tape::snapshot(self)
    }
}

impl Archive for Stack {
    const KIND: &'static str = "stack";

    fn put(&mut self, w: &[String]) {
        self.push_word(w)
    }

    fn take(&mut self) -> Option<Word> {
        self.pull_word()
    }

    fn is_empty(&self) -> bool {
        Stack::is_empty(self)
    }

    fn take_steps(&mut self) -> usize {
        Stack::take_steps(self)
    }

    fn snapshot(&self) -> Snapshot {
        Stack::snapshot(self)
    }
}

/// Feeds the wrapped learner the live datum and one archived word per cycle,
/// moving archived words between two devices so every datum recurs forever.
pub struct ArchivePair<A: Archive> {
    m: AutomaticLearner,
    mem: Memory,
    devices: [A; 2],
    /// Index of the device read from.
    source: usize,
}

pub type TwoTape = ArchivePair<Tape>;
pub type StackPair = ArchivePair<Stack>;

impl<A: Archive> ArchivePair<A> {
    pub fn new(m: AutomaticLearner) -> Self {
        let mem = m.initial_memory();
        ArchivePair { m, mem, devices: [A::default(), A::default()], source: 0 }
    }
}

pub fn two_tape_wrapper(m: AutomaticLearner) -> TwoTape {
    ArchivePair::new(m)
}

pub fn stack_pair_wrapper(m: AutomaticLearner) -> StackPair {
    ArchivePair::new(m)
}

impl<A: Archive> DeviceLearner for ArchivePair<A> {
    fn name(&self) -> String {
        let w = if A::KIND == "tape" { "twotape" } else { "stackpair" };
        format!("{w}:{}", self.m.name())
    }

    fn rate(&self) -> usize {
        2 * self.m.rate()
    }

    fn slack(&self) -> usize {
        self.m.memory_slack()
    }

    fn cycle(&mut self, w: &[String]) -> Result<CycleOutput> {
        let mut tape0 = self.m.apply_cost(&self.mem, w);
        let (mem1, _) = self.m.apply(&self.mem, w)?;
        let t = self.devices[self.source].take().unwrap_or_else(|| w.to_vec());
        tape0 += self.m.apply_cost(&mem1, &t);
        let (mem2, hyp) = self.m.apply(&mem1, &t)?;
        let dest = 1 - self.source;
        self.devices[dest].put(w);
        self.devices[dest].put(&t);
        if self.devices[self.source].is_empty() {
            self.source = dest;
        }
        self.mem = mem2;
        let mut steps = BTreeMap::from([("tape0".to_string(), tape0)]);
        for (i, d) in self.devices.iter_mut().enumerate() {
            steps.insert(format!("{}{}", A::KIND, i + 1), d.take_steps());
        }
        Ok(CycleOutput {
            scratch_len: record_len(&[w, &t, &hyp], &self.mem),
            hypothesis: hyp,
            steps,
            fed: vec![w.to_vec(), t],
        })
    }

    fn snapshots(&self) -> Vec<Snapshot> {
        self.devices.iter().map(A::snapshot).collect()
    }
}

/// Keeps every datum on a queue and feeds the learner the word read from
/// the front, which goes back to the rear.
pub struct QueueWrapper {
    m: AutomaticLearner,
    mem: Memory,
    queue: Queue,
}

pub fn queue_wrapper(m: AutomaticLearner) -> QueueWrapper {
    let mem = m.initial_memory();
    QueueWrapper { m, mem, queue: Queue::new() }
}

impl DeviceLearner for QueueWrapper {
    fn name(&self) -> String {
        format!("queue:{}", self.m.name())
    }

    fn rate(&self) -> usize {
        2 * self.m.rate()
    }

    fn slack(&self) -> usize {
        self.m.memory_slack()
    }

    fn cycle(&mut self, v: &[String]) -> Result<CycleOutput> {
        self.queue.enqueue_word(v);
        let w = self.queue.dequeue_word().expect("queue holds the word just written");
        self.queue.enqueue_word(&w);
        let mut tape0 = scan_cost(v.len()) + 2 * scan_cost(w.len());
        tape0 += self.m.apply_cost(&self.mem, &w);
        let (mem, hyp) = self.m.apply(&self.mem, &w)?;
        self.mem = mem;
        Ok(CycleOutput {
            scratch_len: record_len(&[v, &w, &hyp], &self.mem),
            hypothesis: hyp,
            steps: BTreeMap::from([("tape0".to_string(), tape0), ("queue".to_string(), self.queue.take_steps())]),
            fed: vec![w],
        })
    }

    fn snapshots(&self) -> Vec<Snapshot> {
        vec![self.queue.snapshot()]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Phase {
    Archiving,
    /// `x2` seen; archived words still to be compared with `x`.
    Checking { x2: Word, exhausted: bool },
    /// `x` itself was seen.
    Found { x2: Word },
}

/// Learner for the family `L_ε = {0,1}*`, `L_{x0} = {0,1}* ∪ {x2} − {x}`,
/// `L_{x1} = {0,1}* ∪ {x2}` with one extra tape archiving the data seen
/// before `x2`.
pub struct Theorem35 {
    tape: Tape,
    phase: Phase,
}

pub fn theorem35_learner() -> Theorem35 {
    Theorem35 { tape: Tape::new(), phase: Phase::Archiving }
}

fn stem_of(d: &[String]) -> Option<Word> {
    let (last, x) = d.split_last()?;
    (last == "2" && x.iter().all(|t| t == "0" || t == "1")).then(|| x.to_vec())
}

impl DeviceLearner for Theorem35 {
    fn name(&self) -> String {
        "theorem35".into()
    }

    fn rate(&self) -> usize {
        12
    }

    fn slack(&self) -> usize {
        1
    }

    fn cycle(&mut self, d: &[String]) -> Result<CycleOutput> {
        let mut tape0 = scan_cost(d.len());
        let mut t: Word = Vec::new();
        self.phase = match std::mem::replace(&mut self.phase, Phase::Archiving) {
            Phase::Archiving => match stem_of(d) {
                Some(_) => Phase::Checking { x2: d.to_vec(), exhausted: false },
                None => {
                    self.tape.append_word(d);
                    Phase::Archiving
                }
            },
            Phase::Checking { x2, exhausted } => {
                let x = &x2[..x2.len() - 1];
                tape0 += scan_cost(d.len().max(x.len()));
                let mut hit = d == x;
                let mut exhausted = exhausted;
                if !exhausted {
                    t = self.tape.pop_last_word().unwrap_or_default();
                    tape0 += scan_cost(t.len().max(x.len()));
                    hit |= t == x;
                    exhausted = self.tape.is_empty();
                }
                if hit {
                    Phase::Found { x2 }
                } else {
                    Phase::Checking { x2, exhausted }
                }
            }
            found => found,
        };
        let (hyp, x2): (Word, &[String]) = match &self.phase {
            Phase::Archiving => (Vec::new(), &[]),
            Phase::Checking { x2, .. } => {
                let mut h = x2[..x2.len() - 1].to_vec();
                h.push("0".into());
                (h, x2)
            }
            Phase::Found { x2 } => {
                let mut h = x2[..x2.len() - 1].to_vec();
                h.push("1".into());
                (h, x2)
            }
        };
        tape0 += scan_cost(hyp.len());
        Ok(CycleOutput {
            scratch_len: record_len(&[d, x2, &hyp, &t], &[]),
            hypothesis: hyp,
            steps: BTreeMap::from([("tape0".to_string(), tape0), ("tape1".to_string(), self.tape.take_steps())]),
            fed: Vec::new(),
        })
    }

    fn snapshots(&self) -> Vec<Snapshot> {
        vec![self.tape.snapshot()]
    }
}
