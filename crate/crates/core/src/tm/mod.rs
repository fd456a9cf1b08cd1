//! Position-faithful one-tape Turing machines.

mod machine;
mod run;

pub use machine::{
    Action, Dir, MachineJson, MachineSpec, TransitionJson, TuringMachine, BLANK_SYM, LEND_SYM,
};
pub use run::{
    check_linear_time, default_budget, run_deterministic, run_nondet, run_traced, step,
    visit_bound_estimate, Configuration, LinearTimeReport, LinearTimeViolation, NondetRuns,
    Outcome, RunResult, TraceStep,
};

use crate::error::Result;
use crate::symbol::{BLANK, LEND};

fn fresh(states: &[String], base: &str) -> String {
    let mut name = base.to_string();
    while states.contains(&name) {
        name.push('\'');
    }
    name
}

/// Makes every accepting run end next to the marker: transitions that enter
/// an accepting state away from cell 0 now enter a return sweep that walks
/// left to the marker, steps back onto cell 1 and accepts there. Machines
/// that only accept from the marker are returned unchanged.
pub fn normalize_return_to_origin(m: &TuringMachine) -> Result<TuringMachine> {
    let mut spec = m.to_spec();
    let accepting: Vec<&String> = spec.accepting.iter().collect();
    let redirect = |t: &(String, String, String, String, Dir)| accepting.contains(&&t.2) && t.1 != LEND;
    if !spec.transitions.iter().any(redirect) {
        return Ok(m.clone());
    }
    let ret = fresh(&spec.states, "return");
    let mut states = spec.states.clone();
    states.push(ret.clone());
    let done = fresh(&states, "returned");
    states.push(done.clone());
    let mut transitions: Vec<_> = spec
        .transitions
        .iter()
        .map(|t| {
            if redirect(t) {
                (t.0.clone(), t.1.clone(), ret.clone(), t.3.clone(), t.4)
            } else {
                t.clone()
            }
        })
        .collect();
    for s in m.tape_alphabet().iter().skip(1) {
        transitions.push((ret.clone(), s.clone(), ret.clone(), s.clone(), Dir::L));
    }
    transitions.push((ret.clone(), LEND.into(), done.clone(), LEND.into(), Dir::R));
    debug_assert!(m.tape_alphabet()[1] == BLANK);
    spec.states = states;
    spec.accepting.push(done);
    spec.transitions = transitions;
    TuringMachine::new(spec)
}

/// Hand-written machines used by tests and the command line.
pub mod fixtures {
    use super::*;
    use crate::error::Error;
    use crate::symbol::strings;

    type T = (String, String, String, String, Dir);

    fn t(from: &str, read: &str, to: &str, write: &str, dir: Dir) -> T {
        (from.into(), read.into(), to.into(), write.into(), dir)
    }

    fn spec(states: &[&str], start: &str, accepting: &[&str], extra: &[&str], transitions: Vec<T>) -> MachineSpec {
        MachineSpec {
            states: strings(states),
            input_alphabet: strings(&["0", "1"]),
            output_alphabet: None,
            tape_alphabet: strings(extra),
            start: start.into(),
            accepting: strings(accepting),
            transitions,
        }
    }

    /// Identity over `{0,1}` in one right sweep; accepts at the right end.
    pub fn one_sweep() -> TuringMachine {
        let mut ts = vec![t("start", LEND, "scan", LEND, Dir::R)];
        for a in ["0", "1"] {
            ts.push(t("scan", a, "scan", a, Dir::R));
        }
        ts.push(t("scan", BLANK, "accept", BLANK, Dir::L));
        TuringMachine::new(spec(&["start", "scan", "accept"], "start", &["accept"], &[], ts)).unwrap()
    }

    /// Identity over `{0,1}` that returns to the marker after marking each
    /// cell; quadratic time.
    pub fn zigzag() -> TuringMachine {
        let mut ts = vec![
            t("start", LEND, "seek", LEND, Dir::R),
            t("back", LEND, "seek", LEND, Dir::R),
            t("seek", BLANK, "clean", BLANK, Dir::L),
            t("clean", LEND, "accept", LEND, Dir::R),
        ];
        for a in ["0", "1"] {
            let marked = format!("{a}'");
            ts.push(t("seek", &marked, "seek", &marked, Dir::R));
            ts.push(t("seek", a, "back", &marked, Dir::L));
            ts.push(t("back", &marked, "back", &marked, Dir::L));
            ts.push(t("clean", &marked, "clean", a, Dir::L));
        }
        TuringMachine::new(spec(
            &["start", "seek", "back", "clean", "accept"],
            "start",
            &["accept"],
            &["0'", "1'"],
            ts,
        ))
        .unwrap()
    }

    /// Identity over `{0,1}` with a second, dead branch on the first cell.
    pub fn two_branch() -> TuringMachine {
        let mut ts = vec![t("start", LEND, "fork", LEND, Dir::R)];
        for a in ["0", "1", BLANK] {
            ts.push(t("fork", a, "dead", a, Dir::R));
        }
        for a in ["0", "1"] {
            ts.push(t("fork", a, "scan", a, Dir::R));
            ts.push(t("scan", a, "scan", a, Dir::R));
        }
        ts.push(t("fork", BLANK, "accept", BLANK, Dir::L));
        ts.push(t("scan", BLANK, "accept", BLANK, Dir::L));
        TuringMachine::new(spec(&["start", "fork", "scan", "dead", "accept"], "start", &["accept"], &[], ts))
            .unwrap()
    }

    /// Overwrites the first cell with 0 or with 1 and accepts either way.
    pub fn disagreeing() -> TuringMachine {
        let mut ts = vec![t("start", LEND, "guess", LEND, Dir::R)];
        for a in ["0", "1", BLANK] {
            ts.push(t("guess", a, "accept", "0", Dir::L));
            ts.push(t("guess", a, "accept", "1", Dir::L));
        }
        TuringMachine::new(spec(&["start", "guess", "accept"], "start", &["accept"], &[], ts)).unwrap()
    }

    /// Rejects everything.
    pub fn empty_language() -> TuringMachine {
        let ts = vec![t("start", LEND, "stuck", LEND, Dir::R)];
        TuringMachine::new(spec(&["start", "stuck", "accept"], "start", &["accept"], &[], ts)).unwrap()
    }

    pub const NAMES: [&str; 5] = ["one-sweep", "zigzag", "two-branch", "disagreeing", "empty-language"];

    pub fn machine(name: &str) -> Result<TuringMachine> {
        Ok(match name {
            "one-sweep" => one_sweep(),
            "zigzag" => zigzag(),
            "two-branch" => two_branch(),
            "disagreeing" => disagreeing(),
            "empty-language" => empty_language(),
            _ => return Err(Error::UnknownFixture(name.to_string())),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::error::Error;
    use crate::symbol::{show, strings, word, words_up_to};

    #[test]
    fn step_examples() {
        let m = one_sweep();
        let c = Configuration::initial(&m, &word("01")).unwrap();
        assert_eq!(step(&m, &c).len(), 1);
        let m2 = two_branch();
        let c = Configuration::initial(&m2, &word("0")).unwrap();
        let next = step(&m2, &c);
        assert_eq!(next.len(), 1);
        assert_eq!(step(&m2, &next[0]).len(), 2);
        let r = run_deterministic(&m, &word("01"), 100).unwrap();
        assert!(r.accepted());
        let halted = Configuration { tape: vec![0, 1], head: 1, state: m.states().iter().position(|s| s == "accept").unwrap() };
        assert!(step(&m, &halted).is_empty());
    }

    #[test]
    fn run_outcomes() {
        let m = one_sweep();
        let r = run_deterministic(&m, &word("0110"), 100).unwrap();
        assert_eq!(r.outcome, Outcome::Accepted);
        assert_eq!(r.output.as_ref().map(|w| show(w)), Some("0110".into()));
        assert_eq!(r.steps, 6);
        assert_eq!(r.steps, r.visits.iter().sum::<usize>());
        assert_eq!(r.excursion, 5);
        assert_eq!(run_deterministic(&m, &word("01"), 0).unwrap().outcome, Outcome::Timeout);
        let r = run_deterministic(&empty_language(), &word("1"), 10).unwrap();
        assert_eq!(r.outcome, Outcome::Rejected);
        assert_eq!(r.output, None);
        assert!(matches!(run_deterministic(&m, &word("2"), 10), Err(Error::UnknownSymbol(_))));
        assert!(matches!(run_deterministic(&two_branch(), &word(""), 10), Err(Error::Nondeterministic { .. })));
    }

    #[test]
    fn nondeterministic_runs() {
        let m = two_branch();
        for x in words_up_to(&strings(&["0", "1"]), 4) {
            let r = run_nondet(&m, &x, 50).unwrap();
            assert_eq!(r.accepting.len(), 1);
            assert!(r.rejected);
            assert_eq!(r.output(), Some(&x));
        }
        assert!(matches!(run_nondet(&disagreeing(), &word("1"), 10), Err(Error::OutputDisagreement { .. })));
        let d = one_sweep();
        for x in words_up_to(&strings(&["0", "1"]), 4) {
            let a = run_nondet(&d, &x, 50).unwrap();
            assert_eq!(a.accepting, vec![run_deterministic(&d, &x, 50).unwrap()]);
        }
    }

    #[test]
    fn linear_time_checks() {
        assert!(check_linear_time(&one_sweep(), 2, 6).unwrap().passed());
        let r = check_linear_time(&zigzag(), 4, 8).unwrap();
        assert!(!r.passed());
        assert!(r.violations[0].steps.unwrap() > r.violations[0].bound);
        assert!(!check_linear_time(&one_sweep(), 1, 0).unwrap().passed());
        assert!(check_linear_time(&one_sweep(), 2, 0).unwrap().passed());
    }

    #[test]
    fn visit_bounds() {
        assert_eq!(visit_bound_estimate(&one_sweep(), 6).unwrap(), Some(1));
        assert_eq!(visit_bound_estimate(&empty_language(), 4).unwrap(), None);
        assert_eq!(visit_bound_estimate(&two_branch(), 4).unwrap(), Some(1));
    }

    #[test]
    fn normalization_preserves_outputs() {
        for m in [one_sweep(), zigzag(), empty_language()] {
            let n = normalize_return_to_origin(&m).unwrap();
            for x in words_up_to(&strings(&["0", "1"]), 5) {
                let a = run_deterministic(&m, &x, 1000).unwrap();
                let b = run_deterministic(&n, &x, 1000).unwrap();
                assert_eq!(a.outcome, b.outcome);
                assert_eq!(a.output, b.output);
                assert!(b.steps <= a.steps + a.excursion + 1);
                if b.accepted() {
                    assert!(b.visits[0] >= 1);
                }
            }
        }
        // already returning to the marker: unchanged
        assert_eq!(normalize_return_to_origin(&zigzag()).unwrap(), zigzag());
        let n = normalize_return_to_origin(&one_sweep()).unwrap();
        let r = run_deterministic(&n, &word("01"), 100).unwrap();
        assert!(r.steps > run_deterministic(&one_sweep(), &word("01"), 100).unwrap().steps);
        assert!(normalize_return_to_origin(&two_branch()).is_ok());
    }

    #[test]
    fn machine_validation() {
        let bad = |ts: Vec<(String, String, String, String, Dir)>| {
            TuringMachine::new(MachineSpec {
                states: strings(&["s", "a"]),
                input_alphabet: strings(&["0"]),
                output_alphabet: None,
                tape_alphabet: vec![],
                start: "s".into(),
                accepting: strings(&["a"]),
                transitions: ts,
            })
        };
        let t = |f: &str, r: &str, to: &str, w: &str, d| (f.to_string(), r.to_string(), to.to_string(), w.to_string(), d);
        assert!(bad(vec![t("s", LEND, "a", LEND, Dir::L)]).is_err());
        assert!(bad(vec![t("s", LEND, "a", "0", Dir::R)]).is_err());
        assert!(bad(vec![t("s", "0", "a", LEND, Dir::R)]).is_err());
        assert!(bad(vec![t("a", "0", "s", "0", Dir::R)]).is_err());
        assert!(bad(vec![t("s", "0", "a", "0", Dir::R)]).is_ok());
    }

    #[test]
    fn json_round_trip() {
        for name in NAMES {
            let m = machine(name).unwrap();
            let s = m.to_json_string();
            let back = TuringMachine::from_json_str(&s).unwrap();
            assert_eq!(back, m);
            assert_eq!(back.to_json_string(), s);
        }
    }
}
