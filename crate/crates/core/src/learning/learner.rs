//! Automatic learners: the update `(memory, datum) -> (memory, hypothesis)`
//! is an automatic function over joined tokens.

use std::hash::Hash;

use crate::autofn::AutomaticFunction;
use crate::automata::{build, determinize, minimize, Dfa};
use crate::compile::step_bound;
use crate::error::{Error, Result};
use crate::symbol::{join_tracks, show, split_tracks, strings, word, Alphabet, Word};

/// Memory and hypothesis may span several tracks; the update reads
/// `conv(memory tracks.., datum)` and writes `conv(memory tracks.., hypothesis tracks..)`,
/// each packed into joined tokens.
#[derive(Clone, Debug)]
pub struct AutomaticLearner {
    name: String,
    update: AutomaticFunction,
    mem_tracks: usize,
    hyp_tracks: usize,
    initial_memory: Vec<Word>,
    memory_slack: usize,
    rate: usize,
}

pub type Memory = Vec<Word>;

impl AutomaticLearner {
    pub fn new(
        name: &str,
        update: AutomaticFunction,
        mem_tracks: usize,
        hyp_tracks: usize,
        initial_memory: Memory,
        memory_slack: usize,
        rate: usize,
    ) -> Self {
        AutomaticLearner {
            name: name.to_string(),
            update,
            mem_tracks,
            hyp_tracks,
            initial_memory,
            memory_slack,
            rate,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn update(&self) -> &AutomaticFunction {
        &self.update
    }

    pub fn initial_memory(&self) -> Memory {
        self.initial_memory.clone()
    }

    pub fn memory_slack(&self) -> usize {
        self.memory_slack
    }

    /// Default steps per cycle per unit of `n + 1`.
    pub fn rate(&self) -> usize {
        self.rate
    }

    /// One update. Returns the new memory and the hypothesis as an index word.
    pub fn apply(&self, mem: &[Word], datum: &[String]) -> Result<(Memory, Word)> {
        let mut tracks = mem.to_vec();
        tracks.push(datum.to_vec());
        let input = join_tracks(&tracks);
        let out = self.update.evaluate(&input)?.ok_or_else(|| {
            Error::LearnerFault(format!("{}: update undefined on memory {} and datum {:?}", self.name, show_memory(mem), show(datum)))
        })?;
        let mut parts = split_tracks(&out, self.mem_tracks + self.hyp_tracks)?;
        let hyp = parts.split_off(self.mem_tracks);
        let hyp = if self.hyp_tracks == 1 { hyp.into_iter().next().unwrap() } else { join_tracks(&hyp) };
        Ok((parts, hyp))
    }

    /// Steps the compiled update machine needs on this input.
    pub fn apply_cost(&self, mem: &[Word], datum: &[String]) -> usize {
        step_bound(memory_len(mem).max(datum.len()), self.update.slack())
    }
}

/// Length of the convolution of the memory tracks.
pub fn memory_len(mem: &[Word]) -> usize {
    mem.iter().map(Vec::len).max().unwrap_or(0)
}

pub fn show_memory(mem: &[Word]) -> String {
    format!("{:?}", mem.iter().map(|w| show(w)).collect::<Vec<_>>())
}

pub const NAMES: [&str; 4] = ["extensions", "intervals", "length-bitmap", "missing-string"];

pub fn learner_by_name(name: &str) -> Result<AutomaticLearner> {
    match name {
        "extensions" => extensions_learner(),
        "intervals" => intervals_learner(),
        "length-bitmap" => length_bitmap_learner(),
        "missing-string" => missing_string_fat_learner(),
        _ => Err(Error::UnknownFixture(name.to_string())),
    }
}

/// Relation over a plain multi-track convolution, by exploring `step` from
/// the given start states. Only well-formed convolutions are admitted.
fn relation<S, A, F>(tracks: &[Vec<String>], starts: Vec<S>, accept: A, step: F) -> Result<Dfa>
where
    S: Clone + Eq + Hash,
    A: Fn(&S) -> bool,
    F: Fn(&S, &[Option<&str>]) -> Vec<S>,
{
    let al = Alphabet::conv(tracks)?;
    let k = tracks.len();
    let n = build::explore_nfa(
        &al,
        starts.into_iter().map(|s| (s, vec![false; k])).collect(),
        |(s, _)| accept(s),
        |(s, ended), sym| {
            let c: Vec<Option<&str>> = sym.components().unwrap().iter().map(|p| p.as_deref()).collect();
            if c.iter().zip(ended).any(|(t, &e)| e && t.is_some()) {
                return vec![];
            }
            let ended: Vec<bool> = c.iter().map(Option::is_none).collect();
            step(s, &c).into_iter().map(|t| (t, ended.clone())).collect()
        },
        usize::MAX,
        "learner relation",
    )?;
    Ok(minimize(&determinize(&n)))
}

fn learner_from(name: &str, rel: Dfa, init: Memory, hyp: usize, memory_slack: usize, rate: usize) -> Result<AutomaticLearner> {
    let mem = init.len();
    let input: Vec<usize> = (0..=mem).collect();
    let output: Vec<usize> = (mem + 1..mem + 1 + mem + hyp).collect();
    let graph = build::regroup(&rel, &[input, output])?;
    Ok(AutomaticLearner::new(name, AutomaticFunction::new(&minimize(&graph))?, mem, hyp, init, memory_slack, rate))
}

/// Longest common prefix of the data seen so far. The memory starts as
/// the marker `z`, which no datum contains.
pub fn extensions_learner() -> Result<AutomaticLearner> {
    let b = strings(&["0", "1"]);
    // prefix, datum, prefix', hypothesis
    let tracks = vec![strings(&["0", "1", "z"]), b.clone(), b.clone(), b];
    #[derive(Clone, PartialEq, Eq, Hash)]
    enum S {
        Start,
        Copy,
        Common,
        Cut,
    }
    let rel = relation(&tracks, vec![S::Start], |_| true, |s, c| {
        let (m, d, m2, h) = (c[0], c[1], c[2], c[3]);
        let s = match s {
            S::Start if m == Some("z") => S::Copy,
            S::Start => S::Common,
            s => s.clone(),
        };
        let (want, s) = match s {
            S::Copy => (d, S::Copy),
            S::Common if m.is_some() && m == d => (m, S::Common),
            _ => (None, S::Cut),
        };
        if h != m2 || m2 != want {
            return vec![];
        }
        vec![s]
    })?;
    learner_from("extensions", rel, vec![word("z")], 1, 1, 8)
}

/// Lexicographically least and greatest data seen so far; the hypothesis is
/// `conv(least, greatest)`. The least starts as the marker `z`, which
/// exceeds every datum, and the greatest as `ε`.
pub fn intervals_learner() -> Result<AutomaticLearner> {
    use std::cmp::Ordering;
    let s = strings(&["a", "b"]);
    // lo, hi, datum, lo', hi', hyp lo, hyp hi
    let tracks = vec![strings(&["a", "b", "z"]), s.clone(), s.clone(), s.clone(), s.clone(), s.clone(), s];
    #[derive(Clone, PartialEq, Eq, Hash)]
    struct S {
        lo_vs_d: Ordering,
        hi_vs_d: Ordering,
    }
    // lexicographic comparison continued by one position
    fn cmp(state: Ordering, u: Option<&str>, v: Option<&str>) -> Ordering {
        if state != Ordering::Equal {
            return state;
        }
        match (u, v) {
            (Some(a), Some(b)) => a.cmp(b),
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        }
    }
    let start = S { lo_vs_d: Ordering::Equal, hi_vs_d: Ordering::Equal };
    let rel = relation(&tracks, vec![start], |_| true, |st, c| {
        let (lo, hi, d, lo2, hi2, hl, hh) = (c[0], c[1], c[2], c[3], c[4], c[5], c[6]);
        if hl != lo2 || hh != hi2 {
            return vec![];
        }
        let lo_vs_d = cmp(st.lo_vs_d, lo, d);
        let hi_vs_d = cmp(st.hi_vs_d, hi, d);
        let want_lo = if lo_vs_d == Ordering::Greater { d } else { lo };
        let want_hi = if hi_vs_d == Ordering::Less { d } else { hi };
        if lo2 != want_lo || hi2 != want_hi {
            return vec![];
        }
        vec![S { lo_vs_d, hi_vs_d }]
    })?;
    learner_from("intervals", rel, vec![word("z"), vec![]], 2, 1, 8)
}

/// Memory bit `h` records that a datum of length `h` was seen; the
/// hypothesis is `0^h` for the least unset `h`.
pub fn length_bitmap_learner() -> Result<AutomaticLearner> {
    let b = strings(&["0", "1"]);
    // bitmap, datum, bitmap', hypothesis
    let tracks = vec![b.clone(), b.clone(), b.clone(), strings(&["0"])];
    #[derive(Clone, PartialEq, Eq, Hash)]
    struct S {
        d_ended: bool,
        ones: bool,
    }
    let rel = relation(&tracks, vec![S { d_ended: false, ones: true }], |s| s.d_ended, |s, c| {
        let (m, d, m2, h) = (c[0], c[1], c[2], c[3]);
        let here = d.is_none() && !s.d_ended;
        let want = if m == Some("1") || here {
            Some("1")
        } else if m.is_some() || d.is_some() {
            Some("0")
        } else {
            None
        };
        let ones = s.ones && want == Some("1");
        if m2 != want || h != ones.then_some("0") {
            return vec![];
        }
        vec![S { d_ended: s.d_ended || d.is_none(), ones }]
    })?;
    learner_from("length-bitmap", rel, vec![vec![]], 1, 1, 8)
}

/// The memory is a candidate for the missing word, starting at `ε`; a datum
/// equal to the candidate moves it to its length-lex successor.
pub fn missing_string_fat_learner() -> Result<AutomaticLearner> {
    let b = strings(&["0", "1"]);
    // candidate, datum, candidate', hypothesis
    let tracks = vec![b.clone(), b.clone(), b.clone(), b];
    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    enum Succ {
        /// copying up to the last 0
        Pre,
        /// after the 0 turned into 1
        Post,
        /// candidate is all 1s
        Ones,
        OnesDone,
    }
    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    enum S {
        Advance(Succ),
        Keep { differs: bool },
    }
    let starts = vec![S::Advance(Succ::Pre), S::Advance(Succ::Ones), S::Keep { differs: false }];
    let rel = relation(
        &tracks,
        starts,
        |s| matches!(s, S::Advance(Succ::Post | Succ::OnesDone) | S::Keep { differs: true }),
        |s, c| {
            let (m, d, m2, h) = (c[0], c[1], c[2], c[3]);
            if h != m2 {
                return vec![];
            }
            let next = match *s {
                S::Keep { differs } => (m2 == m).then_some(S::Keep { differs: differs || m != d }),
                S::Advance(p) if m == d => {
                    let q = match (p, m, m2) {
                        (Succ::Pre, Some(a), Some(b)) if a == b => Some(Succ::Pre),
                        (Succ::Pre, Some("0"), Some("1")) => Some(Succ::Post),
                        (Succ::Post, Some("1"), Some("0")) => Some(Succ::Post),
                        (Succ::Post, None, None) => Some(Succ::Post),
                        (Succ::Ones, Some("1"), Some("0")) => Some(Succ::Ones),
                        (Succ::Ones, None, Some("0")) => Some(Succ::OnesDone),
                        (Succ::OnesDone, None, None) => Some(Succ::OnesDone),
                        _ => None,
                    };
                    q.map(S::Advance)
                }
                S::Advance(_) => None,
            };
            next.into_iter().collect()
        },
    )?;
    learner_from("missing-string", rel, vec![vec![]], 1, 1, 8)
}
