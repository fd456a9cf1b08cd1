//! Learning sessions, budget verdicts and convergence checks.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::device::Snapshot;
use super::learner::{learner_by_name, AutomaticLearner};
use super::text::{Text, TextKind};
use super::wrappers::{
    queue_wrapper, stack_pair_wrapper, theorem35_learner, two_tape_wrapper, DeviceLearner, Plain,
};
use crate::error::{Error, Result};
use crate::families::AutomaticFamily;
use crate::symbol::{show, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleRecord {
    pub cycle: usize,
    pub datum: Word,
    pub hypothesis: Word,
    /// Longest datum so far, this one included.
    pub n: usize,
    pub scratch_len: usize,
    pub steps: BTreeMap<String, usize>,
    pub total_steps: usize,
    pub within_budget: bool,
    pub fed: Vec<Word>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub devices: Option<Vec<Snapshot>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionReport {
    pub learner: String,
    pub rate: usize,
    pub slack: usize,
    pub cycles: Vec<CycleRecord>,
    pub final_hypothesis: Word,
    /// Cycle at which the hypothesis last changed.
    pub last_change: usize,
    /// Hypothesis constant over the final quarter of the cycles. This is an
    /// empirical stand-in for convergence in the limit.
    pub converged: bool,
    pub budget_violations: usize,
}

impl SessionReport {
    pub fn budget_ok(&self) -> bool {
        self.budget_violations == 0
    }

    pub fn hypotheses(&self) -> impl Iterator<Item = &Word> {
        self.cycles.iter().map(|c| &c.hypothesis)
    }
}

/// Runs `cycles` cycles on `text`, checking each against
/// `rate·(n+1)` steps and `n + slack` cells of Tape 0.
pub fn run_session(
    learner: &mut dyn DeviceLearner,
    text: &mut Text,
    cycles: usize,
    rate: usize,
    slack: usize,
    with_devices: bool,
) -> Result<SessionReport> {
    let mut records = Vec::with_capacity(cycles);
    let mut n = 0;
    let mut last_change = 0;
    for k in 0..cycles {
        let datum = text.next().ok_or(Error::EmptyLanguage)?;
        n = n.max(datum.len());
        let out = learner.cycle(&datum)?;
        let total: usize = out.steps.values().sum();
        if k > 0 && records.last().is_some_and(|r: &CycleRecord| r.hypothesis != out.hypothesis) {
            last_change = k;
        }
        records.push(CycleRecord {
            cycle: k,
            datum,
            hypothesis: out.hypothesis,
            n,
            scratch_len: out.scratch_len,
            within_budget: total <= rate * (n + 1) && out.scratch_len <= n + slack,
            total_steps: total,
            steps: out.steps,
            fed: out.fed,
            devices: with_devices.then(|| learner.snapshots()),
        });
    }
    let budget_violations = records.iter().filter(|r| !r.within_budget).count();
    Ok(SessionReport {
        learner: learner.name(),
        rate,
        slack,
        final_hypothesis: records.last().map(|r| r.hypothesis.clone()).unwrap_or_default(),
        converged: cycles > 0 && last_change < cycles - cycles / 4,
        last_change,
        cycles: records,
        budget_violations,
    })
}

pub fn run_automatic_learner(l: &AutomaticLearner, text: &mut Text, cycles: usize) -> Result<SessionReport> {
    let mut p = Plain::new(l.clone());
    let (rate, slack) = (p.rate(), p.slack());
    run_session(&mut p, text, cycles, rate, slack, false)
}

/// A learner named on the command line: `missing-string`,
/// `twotape:missing-string`, `queue:..`, `stackpair:..` or `theorem35`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LearnerSpec {
    Automatic(String),
    TwoTape(String),
    Queue(String),
    StackPair(String),
    Theorem35,
}

impl LearnerSpec {
    pub fn build(&self) -> Result<Box<dyn DeviceLearner>> {
        Ok(match self {
            LearnerSpec::Automatic(n) => Box::new(Plain::new(learner_by_name(n)?)),
            LearnerSpec::TwoTape(n) => Box::new(two_tape_wrapper(learner_by_name(n)?)),
            LearnerSpec::Queue(n) => Box::new(queue_wrapper(learner_by_name(n)?)),
            LearnerSpec::StackPair(n) => Box::new(stack_pair_wrapper(learner_by_name(n)?)),
            LearnerSpec::Theorem35 => Box::new(theorem35_learner()),
        })
    }
}

impl FromStr for LearnerSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let spec = match s.split_once(':') {
            None if s == "theorem35" => LearnerSpec::Theorem35,
            None => LearnerSpec::Automatic(s.to_string()),
            Some(("twotape", n)) => LearnerSpec::TwoTape(n.to_string()),
            Some(("queue", n)) => LearnerSpec::Queue(n.to_string()),
            Some(("stackpair", n)) => LearnerSpec::StackPair(n.to_string()),
            Some(_) => return Err(Error::UnknownFixture(s.to_string())),
        };
        spec.build()?;
        Ok(spec)
    }
}

impl fmt::Display for LearnerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LearnerSpec::Automatic(n) => write!(f, "{n}"),
            LearnerSpec::TwoTape(n) => write!(f, "twotape:{n}"),
            LearnerSpec::Queue(n) => write!(f, "queue:{n}"),
            LearnerSpec::StackPair(n) => write!(f, "stackpair:{n}"),
            LearnerSpec::Theorem35 => write!(f, "theorem35"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LearnVerdict {
    pub target: String,
    pub final_hypothesis: String,
    pub last_change: usize,
    pub converged: bool,
    pub correct: bool,
    pub budget_ok: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LearnSettings {
    pub text: TextKind,
    pub cycles: usize,
    /// Learner defaults when `None`.
    pub rate: Option<usize>,
    pub slack: Option<usize>,
    pub seed: u64,
}

/// Runs a fresh learner on a text for each target and judges convergence,
/// correctness and budgets. Sessions are returned alongside the verdicts.
pub fn check_learns(
    spec: &LearnerSpec,
    fam: &AutomaticFamily,
    targets: &[Word],
    settings: &LearnSettings,
) -> Result<Vec<(LearnVerdict, SessionReport)>> {
    targets
        .iter()
        .map(|e| {
            let lang = fam.language_of(e)?;
            let mut text = Text::new(settings.text.clone(), &lang, settings.seed)?;
            let mut l = spec.build()?;
            let rate = settings.rate.unwrap_or(l.rate());
            let slack = settings.slack.unwrap_or(l.slack());
            let r = run_session(l.as_mut(), &mut text, settings.cycles, rate, slack, false)?;
            let h = &r.final_hypothesis;
            let correct = fam.is_index(h) && fam.index_equivalent(h, e)?;
            let v = LearnVerdict {
                target: show(e),
                final_hypothesis: show(h),
                last_change: r.last_change,
                converged: r.converged,
                correct,
                budget_ok: r.budget_ok(),
                passed: r.converged && correct && r.budget_ok(),
            };
            Ok((v, r))
        })
        .collect()
}
