//! Recovering the graph automaton of a function computed by a linear-time
//! position-faithful machine, by guessing per-cell local computations and
//! matching their crossing sequences.

use std::cell::RefCell;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::autofn::AutomaticFunction;
use crate::automata::{
    build, determinize, minimize, prefix_closure, right_quotient_symbol, trim,
    Dfa, Nfa,
};
use crate::error::{Error, Result};
use crate::symbol::{show, words_up_to, Alphabet, Symbol};
use crate::tm::{
    check_linear_time, normalize_return_to_origin, run_deterministic, run_nondet, Dir,
    LinearTimeReport, Outcome, TuringMachine, BLANK_SYM, LEND_SYM,
};

/// Where the head came from when it arrived at a cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Start,
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Visit {
    pub entry: Side,
    pub state: usize,
    pub exit_state: usize,
    pub dir: Dir,
    pub write: usize,
}

/// Everything that happens at one cell during a run.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LocalComputation {
    pub base: usize,
    pub visits: Vec<Visit>,
    /// The run ends here, arriving from the given side in an accepting state.
    pub halt: Option<(Side, usize)>,
}

/// One boundary crossing: the direction the head moved and the state it
/// carried across.
pub type Crossing = (Dir, usize);

impl LocalComputation {
    /// Symbol left in the cell.
    pub fn final_symbol(&self) -> usize {
        self.visits.last().map_or(self.base, |v| v.write)
    }

    pub fn left_profile(&self) -> Vec<Crossing> {
        let mut p = Vec::new();
        for v in &self.visits {
            if v.entry == Side::Left {
                p.push((Dir::R, v.state));
            }
            if v.dir == Dir::L {
                p.push((Dir::L, v.exit_state));
            }
        }
        if let Some((Side::Left, h)) = self.halt {
            p.push((Dir::R, h));
        }
        p
    }

    pub fn right_profile(&self) -> Vec<Crossing> {
        let mut p = Vec::new();
        for v in &self.visits {
            if v.entry == Side::Right {
                p.push((Dir::L, v.state));
            }
            if v.dir == Dir::R {
                p.push((Dir::R, v.exit_state));
            }
        }
        if let Some((Side::Right, h)) = self.halt {
            p.push((Dir::L, h));
        }
        p
    }
}

fn side_after(d: Dir) -> Side {
    match d {
        Dir::L => Side::Left,
        Dir::R => Side::Right,
    }
}

/// Every internally consistent local computation with at most `max_visits`
/// visits, for the marker cell and for cells holding an input symbol or a
/// blank.
pub fn enumerate_local(m: &TuringMachine, max_visits: usize) -> Vec<LocalComputation> {
    let mut out = Vec::new();
    let mut bases: Vec<usize> = m.input_alphabet().iter().map(|t| m.tape_symbol(t).unwrap()).collect();
    bases.push(BLANK_SYM);
    for &b in &bases {
        grow(m, max_visits, LocalComputation { base: b, visits: vec![], halt: None }, Side::Left, b, &mut out);
    }
    grow(m, max_visits, LocalComputation { base: LEND_SYM, visits: vec![], halt: None }, Side::Start, LEND_SYM, &mut out);
    out.sort();
    out.dedup();
    out
}

fn grow(m: &TuringMachine, cap: usize, lc: LocalComputation, side: Side, z: usize, out: &mut Vec<LocalComputation>) {
    if side != Side::Start {
        out.push(lc.clone());
    }
    let candidates: Vec<usize> = if side == Side::Start {
        vec![m.start()]
    } else {
        (0..m.num_states()).collect()
    };
    for s in candidates {
        if m.is_accepting(s) {
            let mut h = lc.clone();
            h.halt = Some((side, s));
            out.push(h);
            continue;
        }
        if lc.visits.len() >= cap {
            continue;
        }
        for a in m.actions(s, z) {
            let mut next = lc.clone();
            next.visits.push(Visit { entry: side, state: s, exit_state: a.to, dir: a.dir, write: a.write });
            grow(m, cap, next, side_after(a.dir), a.write, out);
        }
    }
}

/// What a cell contributes given the crossings on its left boundary.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Guided {
    right: Vec<Crossing>,
    final_symbol: usize,
    halted: bool,
}

/// Local computations consistent with the left crossing sequence `left`,
/// with right-side entries guessed.
fn guided(m: &TuringMachine, cap: usize, left: &[Crossing], base: usize, at_marker: bool) -> Vec<Guided> {
    struct Ctx<'a> {
        m: &'a TuringMachine,
        cap: usize,
        left: &'a [Crossing],
        out: Vec<Guided>,
    }
    fn enter(c: &mut Ctx, i: usize, z: usize, n: usize, side: Side, right: &mut Vec<Crossing>) {
        match side {
            Side::Start => {
                let s = c.m.start();
                if c.m.is_accepting(s) {
                    if c.left.is_empty() {
                        c.out.push(Guided { right: right.clone(), final_symbol: z, halted: true });
                    }
                } else {
                    visit(c, i, z, n, s, right);
                }
            }
            Side::Left => match c.left.get(i) {
                None => c.out.push(Guided { right: right.clone(), final_symbol: z, halted: false }),
                Some(&(Dir::R, s)) if c.m.is_accepting(s) => {
                    if i + 1 == c.left.len() {
                        c.out.push(Guided { right: right.clone(), final_symbol: z, halted: true });
                    }
                }
                Some(&(Dir::R, s)) => visit(c, i + 1, z, n, s, right),
                Some(_) => {}
            },
            Side::Right => {
                if i == c.left.len() {
                    c.out.push(Guided { right: right.clone(), final_symbol: z, halted: false });
                }
                for s in 0..c.m.num_states() {
                    if c.m.is_accepting(s) {
                        if i == c.left.len() {
                            right.push((Dir::L, s));
                            c.out.push(Guided { right: right.clone(), final_symbol: z, halted: true });
                            right.pop();
                        }
                    } else if n < c.cap && !c.m.actions(s, z).is_empty() {
                        right.push((Dir::L, s));
                        visit(c, i, z, n, s, right);
                        right.pop();
                    }
                }
            }
        }
    }
    fn visit(c: &mut Ctx, i: usize, z: usize, n: usize, s: usize, right: &mut Vec<Crossing>) {
        if n >= c.cap {
            return;
        }
        for a in c.m.actions(s, z).to_vec() {
            match a.dir {
                Dir::L => {
                    if c.left.get(i) == Some(&(Dir::L, a.to)) {
                        enter(c, i + 1, a.write, n + 1, Side::Left, right);
                    }
                }
                Dir::R => {
                    right.push((Dir::R, a.to));
                    enter(c, i, a.write, n + 1, Side::Right, right);
                    right.pop();
                }
            }
        }
    }
    let mut c = Ctx { m, cap, left, out: Vec::new() };
    let side = if at_marker { Side::Start } else { Side::Left };
    enter(&mut c, 0, base, 0, side, &mut Vec::new());
    let mut out = c.out;
    out.sort_by(|a, b| (&a.right, a.final_symbol, a.halted).cmp(&(&b.right, b.final_symbol, b.halted)));
    out.dedup();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum AState {
    Scan {
        left: Vec<Crossing>,
        in_ended: bool,
        out_ended: bool,
        halted: bool,
    },
    Done,
}

pub const DEFAULT_STATE_CAP: usize = 200_000;

/// NFA over pairs `(input or PAD, output or PAD)` accepting
/// `conv(x·PAD^s, y·PAD^t)` for accepting runs mapping `x` to `y` that stay
/// left of the last cell.
pub fn build_a(m: &TuringMachine, max_visits: usize, cap: usize) -> Result<Nfa> {
    let tracks = [m.input_alphabet().to_vec(), m.output_alphabet().to_vec()];
    let al = Alphabet::conv_with_full_pad(&tracks)?;
    let out_index: HashMap<usize, String> = m
        .output_alphabet()
        .iter()
        .map(|t| (m.tape_symbol(t).unwrap(), t.clone()))
        .collect();
    let cache: RefCell<HashMap<(Vec<Crossing>, usize), Vec<Guided>>> = RefCell::new(HashMap::new());
    let local = |left: &[Crossing], base: usize| -> Vec<Guided> {
        let key = (left.to_vec(), base);
        if let Some(v) = cache.borrow().get(&key) {
            return v.clone();
        }
        let v = guided(m, max_visits, left, base, false);
        cache.borrow_mut().insert(key, v.clone());
        v
    };
    let starts: Vec<AState> = guided(m, max_visits, &[], LEND_SYM, true)
        .into_iter()
        .map(|g| AState::Scan { left: g.right, in_ended: false, out_ended: false, halted: g.halted })
        .collect();
    build::explore_nfa(
        &al,
        starts,
        |s| *s == AState::Done,
        |s, sym| {
            let c = sym.components().unwrap();
            let (x, y) = (c[0].as_ref(), c[1].as_ref());
            let (left, in_ended, out_ended, halted) = match s {
                AState::Done => {
                    return if x.is_none() && y.is_none() { vec![AState::Done] } else { vec![] };
                }
                AState::Scan { left, in_ended, out_ended, halted } => (left, *in_ended, *out_ended, *halted),
            };
            if in_ended && x.is_some() {
                return vec![];
            }
            if x.is_none() && y.is_none() && left.is_empty() {
                // unreached cell past both words: the run must be over
                return if halted { vec![AState::Done] } else { vec![] };
            }
            let base = match x {
                Some(t) => m.tape_symbol(t).unwrap(),
                None => BLANK_SYM,
            };
            let mut next = Vec::new();
            for g in local(left, base) {
                if halted && g.halted {
                    continue;
                }
                let ended_now = match (out_ended, g.final_symbol == BLANK_SYM) {
                    (true, _) => true,
                    (false, true) => true,
                    (false, false) => false,
                };
                let expect = if ended_now {
                    None
                } else {
                    match out_index.get(&g.final_symbol) {
                        Some(t) => Some(t),
                        None => continue,
                    }
                };
                if expect != y {
                    continue;
                }
                next.push(AState::Scan {
                    left: g.right,
                    in_ended: x.is_none(),
                    out_ended: ended_now,
                    halted: halted || g.halted,
                });
            }
            next
        },
        cap,
        "crossing-sequence automaton",
    )
}

/// `{conv(x,y) : conv(x,y)·(PAD,PAD) is a prefix of a word of A}` with no
/// trailing all-PAD symbol, over the plain convolution alphabet.
pub fn build_b(a: &Nfa) -> Result<Dfa> {
    let al = a.alphabet();
    let tracks = al.tracks().ok_or(Error::NotConvolution)?;
    let pad = Symbol::Tuple(vec![None; tracks.len()]);
    let q = right_quotient_symbol(&prefix_closure(&trim(a)), &pad)?;
    let d = minimize(&determinize(&q));
    // dropping the all-PAD symbol leaves exactly the words without one
    let plain = Alphabet::conv(&tracks)?;
    Ok(minimize(&d.with_alphabet(&plain)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractReport {
    pub rate: usize,
    pub visit_bound: usize,
    pub validate_len: usize,
    pub linear_time: LinearTimeReport,
    pub normalized_states: usize,
    pub a_states: usize,
    pub graph_states: usize,
    pub slack: usize,
    pub validated_inputs: usize,
}

/// Machine to automatic function: linear-time check, normalization, the
/// crossing-sequence automaton, quotient, certification, and validation
/// against direct runs on every input up to `validate_len`.
pub fn extract_automatic(
    m: &TuringMachine,
    rate: usize,
    max_visits: usize,
    validate_len: usize,
    cap: usize,
) -> Result<(AutomaticFunction, ExtractReport)> {
    let linear = check_linear_time(m, rate, validate_len)?;
    if let Some(v) = linear.violations.first() {
        return Err(Error::NotLinearTime {
            rate,
            input: v.input.clone(),
            detail: match v.steps {
                Some(s) => format!("{s} steps, bound {}", v.bound),
                None => format!("still running after {} steps", v.bound),
            },
        });
    }
    let n = normalize_return_to_origin(m)?;
    let a = build_a(&n, max_visits, cap)?;
    let b = build_b(&a)?;
    let f = AutomaticFunction::new(&b)?;
    let mut checked = 0;
    for x in words_up_to(m.input_alphabet(), validate_len) {
        let budget = rate * (x.len() + 1);
        let machine = if m.is_deterministic() {
            let r = run_deterministic(m, &x, budget)?;
            (r.outcome == Outcome::Accepted).then(|| r.output.unwrap())
        } else {
            run_nondet(m, &x, budget)?.output().cloned()
        };
        let graph = f.evaluate(&x)?;
        if machine != graph {
            let fmt = |o: &Option<crate::symbol::Word>| o.as_ref().map_or("undefined".into(), |w| format!("{:?}", show(w)));
            return Err(Error::ExtractionMismatch { input: show(&x), machine: fmt(&machine), graph: fmt(&graph) });
        }
        checked += 1;
    }
    let report = ExtractReport {
        rate,
        visit_bound: max_visits,
        validate_len,
        linear_time: linear,
        normalized_states: n.num_states(),
        a_states: a.num_states(),
        graph_states: f.graph().num_states(),
        slack: f.slack(),
        validated_inputs: checked,
    };
    Ok((f, report))
}
