//! Automatic relations and functions: functionality, length slack,
//! evaluation and domains.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::automata::json::{self, AutomatonJson};
use crate::automata::{build, determinize, intersect_all, minimize, project, Dfa, StateId};
use crate::error::{Error, Result};
use crate::symbol::{convolve_unchecked, show, Alphabet, Symbol, Word};

/// A relation given by a DFA over a convolution alphabet. Only well-formed
/// convolutions count as members; the stored graph is minimized and
/// restricted to them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomaticRelation {
    graph: Dfa,
    tracks: Vec<Vec<String>>,
}

impl AutomaticRelation {
    pub fn new(graph: &Dfa) -> Result<Self> {
        let tracks = graph.alphabet().tracks().ok_or(Error::NotConvolution)?;
        if tracks.iter().any(Vec::is_empty) {
            return Err(Error::InvalidTracks("every track needs a symbol".into()));
        }
        let full = Alphabet::conv(&tracks)?;
        if &full != graph.alphabet() {
            return Err(Error::InvalidAutomaton(
                "graph alphabet must be the full convolution alphabet of its tracks".into(),
            ));
        }
        let wf = build::wellformed(&full)?;
        let graph = intersect_all(&[graph, &wf])?;
        Ok(AutomaticRelation { graph, tracks })
    }

    pub fn arity(&self) -> usize {
        self.tracks.len()
    }

    pub fn graph(&self) -> &Dfa {
        &self.graph
    }

    pub fn tracks(&self) -> &[Vec<String>] {
        &self.tracks
    }

    pub fn contains(&self, words: &[Word]) -> bool {
        words.len() == self.arity() && self.graph.accepts(&convolve_unchecked(words))
    }
}

/// Outcome of the functionality check on a binary relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Functionality {
    Functional,
    Counterexample { input: Word, first: Word, second: Word },
}

fn require_binary(r: &AutomaticRelation) -> Result<()> {
    if r.arity() != 2 {
        return Err(Error::InvalidTracks(format!("expected arity 2, got {}", r.arity())));
    }
    Ok(())
}

/// Per state and input component (tokens, then PAD last), the live moves
/// `(output component, target)` with outputs in convolution order.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Moves {
    nx: usize,
    rows: Vec<Vec<(Option<usize>, StateId)>>,
}

impl Moves {
    fn new(g: &Dfa, ins: &[String], outs: &[String]) -> Self {
        let live = g.coreachable();
        let nx = ins.len();
        let ny = outs.len();
        let mut rows = vec![Vec::new(); g.num_states() * (nx + 1)];
        for (a, s) in g.alphabet().symbols().iter().enumerate() {
            let c = s.components().expect("binary convolution");
            let xi = c[0].as_ref().map_or(nx, |t| ins.iter().position(|u| u == t).unwrap());
            let yi = c[1].as_ref().map(|t| outs.iter().position(|u| u == t).unwrap());
            for q in 0..g.num_states() {
                let r = g.next(q, a);
                if live[r] {
                    rows[q * (nx + 1) + xi].push((yi, r));
                }
            }
        }
        for row in &mut rows {
            row.sort_by_key(|&(y, _)| y.unwrap_or(ny));
        }
        Moves { nx, rows }
    }

    fn at(&self, q: StateId, xi: usize) -> &[(Option<usize>, StateId)] {
        &self.rows[q * (self.nx + 1) + xi]
    }
}

/// Searches for `x, y ≠ y'` with both pairs in `r`; the witness is a shortest
/// one in convolution order.
pub fn check_functional(r: &AutomaticRelation) -> Result<Functionality> {
    require_binary(r)?;
    let t = r.tracks();
    let g = r.graph();
    let nx = t[0].len();
    let mv = Moves::new(g, &t[0], &t[1]);
    if !g.coreachable()[g.start()] {
        return Ok(Functionality::Functional);
    }
    // two runs over the same input; `done` marks a run past its last symbol
    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    struct P {
        q: [StateId; 2],
        done: [bool; 2],
        ended: [bool; 3],
        diff: bool,
    }
    type Step = (Option<usize>, Option<usize>, Option<usize>);
    let start = P { q: [g.start(); 2], done: [false; 2], ended: [false; 3], diff: false };
    let mut parent: HashMap<P, (P, Step)> = HashMap::new();
    let mut queue = VecDeque::from([start]);
    let mut seen = HashSet::from([start]);
    let mut hit = None;
    while let Some(p) = queue.pop_front() {
        if p.diff && g.is_accepting(p.q[0]) && g.is_accepting(p.q[1]) {
            hit = Some(p);
            break;
        }
        for xi in 0..=nx {
            let xs = (xi < nx).then_some(xi);
            if p.ended[0] && xs.is_some() {
                continue;
            }
            let opts = |k: usize| -> Vec<(Option<usize>, StateId, bool)> {
                let q = p.q[k];
                let mut v: Vec<_> = if p.done[k] {
                    Vec::new()
                } else {
                    mv.at(q, xi).iter().map(|&(y, r)| (y, r, false)).collect()
                };
                if xs.is_none() && g.is_accepting(q) {
                    v.push((None, q, true));
                }
                v
            };
            let (o1, o2) = (opts(0), opts(1));
            for &(y1, r1, d1) in &o1 {
                if p.ended[1] && y1.is_some() {
                    continue;
                }
                for &(y2, r2, d2) in &o2 {
                    if (p.ended[2] && y2.is_some()) || (xs.is_none() && y1.is_none() && y2.is_none()) {
                        continue;
                    }
                    let n = P {
                        q: [r1, r2],
                        done: [d1, d2],
                        ended: [xs.is_none(), y1.is_none(), y2.is_none()],
                        diff: p.diff || y1 != y2,
                    };
                    if seen.insert(n) {
                        parent.insert(n, (p, (xs, y1, y2)));
                        queue.push_back(n);
                    }
                }
            }
        }
    }
    let Some(mut p) = hit else {
        return Ok(Functionality::Functional);
    };
    let mut steps = Vec::new();
    while let Some(&(prev, s)) = parent.get(&p) {
        steps.push(s);
        p = prev;
    }
    steps.reverse();
    let pick = |al: &[String], f: fn(&Step) -> Option<usize>| -> Word {
        steps.iter().filter_map(|s| f(s).map(|i| al[i].clone())).collect()
    };
    Ok(Functionality::Counterexample {
        input: pick(&t[0], |s| s.0),
        first: pick(&t[1], |s| s.1),
        second: pick(&t[1], |s| s.2),
    })
}

/// Largest `|y| - |x|` over the relation: the longest run of input-padded
/// symbols ending in acceptance. A cycle through such symbols means some
/// input has infinitely many images.
pub fn length_bound(r: &AutomaticRelation) -> Result<usize> {
    require_binary(r)?;
    let g = r.graph();
    let live = g.coreachable();
    let pad_in: Vec<usize> = g
        .alphabet()
        .symbols()
        .iter()
        .enumerate()
        .filter(|(_, s)| s.components().unwrap()[0].is_none())
        .map(|(a, _)| a)
        .collect();
    let n = g.num_states();
    // longest[q] = longest padded-input path from q to acceptance
    let mut longest: Vec<Option<usize>> = vec![None; n];
    let mut on_stack = vec![false; n];
    fn visit(
        q: StateId,
        g: &Dfa,
        pad_in: &[usize],
        live: &[bool],
        longest: &mut [Option<usize>],
        on_stack: &mut [bool],
    ) -> Result<usize> {
        if let Some(v) = longest[q] {
            return Ok(v);
        }
        if on_stack[q] {
            return Err(Error::NotFunctional(format!(
                "output can grow without bound past the input (cycle at state {})",
                g.names()[q]
            )));
        }
        on_stack[q] = true;
        let mut best = 0;
        for &a in pad_in {
            let r = g.next(q, a);
            if live[r] {
                best = best.max(1 + visit(r, g, pad_in, live, longest, on_stack)?);
            }
        }
        on_stack[q] = false;
        longest[q] = Some(best);
        Ok(best)
    }
    let mut c = 0;
    for q in (0..n).filter(|&q| live[q]) {
        c = c.max(visit(q, g, &pad_in, &live, &mut longest, &mut on_stack)?);
    }
    Ok(c)
}

/// An automatic function `track 0 ↦ track 1` with a certified graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomaticFunction {
    relation: AutomaticRelation,
    slack: usize,
    moves: Moves,
}

impl AutomaticFunction {
    /// Certifies functionality and computes the slack.
    pub fn new(graph: &Dfa) -> Result<Self> {
        Self::from_relation(AutomaticRelation::new(graph)?)
    }

    pub fn from_relation(relation: AutomaticRelation) -> Result<Self> {
        if let Functionality::Counterexample { input, first, second } = check_functional(&relation)? {
            return Err(Error::NotFunctional(format!(
                "{:?} relates to both {:?} and {:?}",
                show(&input),
                show(&first),
                show(&second)
            )));
        }
        let slack = length_bound(&relation)?;
        let t = relation.tracks();
        let moves = Moves::new(relation.graph(), &t[0], &t[1]);
        Ok(AutomaticFunction { relation, slack, moves })
    }

    pub fn relation(&self) -> &AutomaticRelation {
        &self.relation
    }

    pub fn graph(&self) -> &Dfa {
        self.relation.graph()
    }

    pub fn slack(&self) -> usize {
        self.slack
    }

    pub fn input_alphabet(&self) -> &[String] {
        &self.relation.tracks()[0]
    }

    pub fn output_alphabet(&self) -> &[String] {
        &self.relation.tracks()[1]
    }

    /// `f(x)`, or `None` outside the domain (including inputs with foreign
    /// symbols).
    pub fn evaluate(&self, x: &[String]) -> Result<Option<Word>> {
        let ins = self.input_alphabet();
        let Some(xs) = x.iter().map(|t| ins.iter().position(|s| s == t)).collect::<Option<Vec<usize>>>() else {
            return Ok(None);
        };
        let g = self.graph();
        let mv = &self.moves;
        let len = x.len() + self.slack;
        let n = g.num_states();
        let col = |j: usize| xs.get(j).copied().unwrap_or(ins.len());
        let idx = |q: StateId, e: bool| 2 * q + usize::from(e);
        // live[j][(q,e)]: acceptance still reachable from layer j
        let mut live = vec![vec![false; 2 * n]; len + 1];
        for j in (0..=len).rev() {
            for q in 0..n {
                for e in [false, true] {
                    let mut ok = j >= x.len() && g.is_accepting(q) && (j == x.len() || !e);
                    if !ok && j < len && !(e && j >= x.len()) {
                        ok = mv
                            .at(q, col(j))
                            .iter()
                            .any(|&(y, r)| !(e && y.is_some()) && live[j + 1][idx(r, y.is_none())]);
                    }
                    live[j][idx(q, e)] = ok;
                }
            }
        }
        if !live[0][idx(g.start(), false)] {
            return Ok(None);
        }
        let mut found: Vec<Word> = Vec::new();
        let mut y = Vec::new();
        self.collect(x.len(), len, 0, g.start(), false, &live, &col, &mut y, &mut found);
        match found.len() {
            1 => Ok(found.pop()),
            0 => Ok(None),
            _ => Err(Error::AmbiguousOutput {
                input: show(x),
                first: show(&found[0]),
                second: show(&found[1]),
            }),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn collect(
        &self,
        xlen: usize,
        len: usize,
        j: usize,
        q: StateId,
        ended: bool,
        live: &[Vec<bool>],
        col: &dyn Fn(usize) -> usize,
        y: &mut Word,
        found: &mut Vec<Word>,
    ) {
        if found.len() >= 2 {
            return;
        }
        let g = self.graph();
        if j >= xlen && g.is_accepting(q) && (j == xlen || !ended) {
            found.push(y.clone());
        }
        if j >= len || (ended && j >= xlen) {
            return;
        }
        for &(o, r) in self.moves.at(q, col(j)) {
            if (ended && o.is_some()) || !live[j + 1][2 * r + usize::from(o.is_none())] {
                continue;
            }
            if let Some(t) = o {
                y.push(self.output_alphabet()[t].clone());
            }
            self.collect(xlen, len, j + 1, r, o.is_none(), live, col, y, found);
            if o.is_some() {
                y.pop();
            }
        }
    }

    /// Minimal DFA of the domain, over the plain input alphabet.
    pub fn domain(&self) -> Result<Dfa> {
        let p = minimize(&determinize(&project(self.graph(), &[0])?));
        untrack(&p)
    }

    pub fn to_json(&self) -> AutomatonJson {
        AutomatonJson::from_dfa(self.graph())
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Self::new(&json::dfa_from_str(text)?)
    }
}

/// Re-labels a DFA over a one-track convolution alphabet with plain atoms.
pub fn untrack(d: &Dfa) -> Result<Dfa> {
    let tracks = d.alphabet().tracks().filter(|t| t.len() == 1).ok_or(Error::NotConvolution)?;
    let atoms = Alphabet::atoms(&tracks[0])?;
    let map: Vec<usize> = atoms
        .tokens()
        .unwrap()
        .iter()
        .map(|t| d.alphabet().index_of(&Symbol::Tuple(vec![Some(t.clone())])).unwrap())
        .collect();
    let k = atoms.len();
    let mut delta = Vec::with_capacity(d.num_states() * k);
    for q in 0..d.num_states() {
        delta.extend(map.iter().map(|&a| d.next(q, a)));
    }
    Dfa::with_names(atoms, d.names().to_vec(), d.start(), d.accepting().to_vec(), delta)
}

/// Inverse of [`untrack`].
pub fn retrack(d: &Dfa) -> Result<Dfa> {
    let tokens = d.alphabet().tokens().ok_or(Error::InvalidAutomaton("expected atoms".into()))?;
    let conv = Alphabet::conv(&[tokens])?;
    let map: Vec<usize> = conv
        .symbols()
        .iter()
        .map(|s| d.alphabet().index_of_atom(s.components().unwrap()[0].as_ref().unwrap()).unwrap())
        .collect();
    let mut delta = Vec::new();
    for q in 0..d.num_states() {
        delta.extend(map.iter().map(|&a| d.next(q, a)));
    }
    Dfa::with_names(conv, d.names().to_vec(), d.start(), d.accepting().to_vec(), delta)
}

/// Built-in functions and relations.
pub mod fixtures {
    use super::*;
    use crate::automata::Nfa;
    use crate::symbol::strings;

    fn comps(s: &Symbol) -> (Option<&str>, Option<&str>) {
        let c = s.components().unwrap();
        (c[0].as_deref(), c[1].as_deref())
    }

    fn conv2(input: &[&str], output: &[&str]) -> Alphabet {
        Alphabet::conv(&[strings(input), strings(output)]).unwrap()
    }

    pub fn identity_graph() -> Dfa {
        let al = conv2(&["0", "1"], &["0", "1"]);
        build::explore_dfa(&al, (), |_| true, |_, s| match comps(s) {
            (Some(a), Some(b)) if a == b => Some(()),
            _ => None,
        })
    }

    /// Swaps the first and the last symbol over `{0,1,2}`.
    pub fn exchange_graph() -> Dfa {
        #[derive(Clone, PartialEq, Eq, Hash)]
        enum S {
            Start,
            One,
            Mid(String, String),
            End,
        }
        let al = conv2(&["0", "1", "2"], &["0", "1", "2"]);
        let n: Nfa = build::explore_nfa(
            &al,
            vec![S::Start],
            |s| matches!(s, S::Start | S::One | S::End),
            |s, sym| {
                let (a, b) = match comps(sym) {
                    (Some(a), Some(b)) => (a.to_string(), b.to_string()),
                    _ => return vec![],
                };
                match s {
                    S::Start => {
                        let mut v = vec![S::Mid(a.clone(), b.clone())];
                        if a == b {
                            v.push(S::One);
                        }
                        v
                    }
                    S::Mid(p, q) if a == *q && b == *p => vec![S::End, S::Mid(p.clone(), q.clone())]
                        .into_iter()
                        .filter(|t| matches!(t, S::End) || a == b)
                        .collect(),
                    S::Mid(p, q) if a == b => vec![S::Mid(p.clone(), q.clone())],
                    _ => vec![],
                }
            },
            usize::MAX,
            "exchange",
        )
        .unwrap();
        minimize(&determinize(&n))
    }

    /// Deletes the first occurrence of 0, if any, over `{0,1}`.
    pub fn delete_first_0_graph() -> Dfa {
        #[derive(Clone, PartialEq, Eq, Hash)]
        enum S {
            Copy,
            Expect(String),
            Done,
        }
        let al = conv2(&["0", "1"], &["0", "1"]);
        minimize(&build::explore_dfa(&al, S::Copy, |s| matches!(s, S::Copy | S::Done), |s, sym| {
            match (s, comps(sym)) {
                (S::Copy, (Some("1"), Some("1"))) => Some(S::Copy),
                (S::Copy, (Some("0"), Some(b))) => Some(S::Expect(b.to_string())),
                (S::Copy, (Some("0"), None)) => Some(S::Done),
                (S::Expect(e), (Some(a), Some(b))) if a == e => Some(S::Expect(b.to_string())),
                (S::Expect(e), (Some(a), None)) if a == e => Some(S::Done),
                _ => None,
            }
        }))
    }

    /// `x ↦ x·ab` over `{a,b}`.
    pub fn append_suffix_graph() -> Dfa {
        let al = conv2(&["a", "b"], &["a", "b"]);
        minimize(&build::explore_dfa(&al, 0u8, |&s| s == 2, |&s, sym| match (s, comps(sym)) {
            (0, (Some(a), Some(b))) if a == b => Some(0),
            (0, (None, Some("a"))) => Some(1),
            (1, (None, Some("b"))) => Some(2),
            _ => None,
        }))
    }

    /// `{(x, y) : |x| = |y|}` over `{0,1}`; not a function.
    pub fn equal_length_graph() -> Dfa {
        let al = conv2(&["0", "1"], &["0", "1"]);
        build::explore_dfa(&al, (), |_| true, |_, s| match comps(s) {
            (Some(_), Some(_)) => Some(()),
            _ => None,
        })
    }

    /// `{(x, x·z)}` over `{0,1}`: every extension of the input; not a
    /// function, and the output outgrows the input without bound.
    pub fn prefix_graph() -> Dfa {
        let al = conv2(&["0", "1"], &["0", "1"]);
        build::explore_dfa(&al, false, |_| true, |&tail, s| match comps(s) {
            (Some(a), Some(b)) if a == b && !tail => Some(false),
            (None, Some(_)) => Some(true),
            _ => None,
        })
    }

    pub const FUNCTIONS: [&str; 4] = ["identity", "exchange", "delete-first-0", "append-suffix"];
    pub const RELATIONS: [&str; 2] = ["equal-length", "prefix"];

    pub fn graph(name: &str) -> Result<Dfa> {
        Ok(match name {
            "identity" => identity_graph(),
            "exchange" => exchange_graph(),
            "delete-first-0" => delete_first_0_graph(),
            "append-suffix" => append_suffix_graph(),
            "equal-length" => equal_length_graph(),
            "prefix" => prefix_graph(),
            _ => return Err(Error::UnknownFixture(name.to_string())),
        })
    }

    pub fn function(name: &str) -> Result<AutomaticFunction> {
        if !FUNCTIONS.contains(&name) {
            return Err(Error::UnknownFixture(name.to_string()));
        }
        AutomaticFunction::new(&graph(name)?)
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::symbol::{strings, word, words_up_to};

    fn eval(f: &AutomaticFunction, x: &str) -> Option<String> {
        f.evaluate(&word(x)).unwrap().map(|y| show(&y))
    }

    #[test]
    fn exchange_examples() {
        let f = function("exchange").unwrap();
        assert_eq!(eval(&f, "012").as_deref(), Some("210"));
        assert_eq!(eval(&f, "").as_deref(), Some(""));
        assert_eq!(eval(&f, "1").as_deref(), Some("1"));
        assert_eq!(eval(&f, "7"), None);
        assert_eq!(f.slack(), 0);
    }

    #[test]
    fn delete_first_0_examples() {
        let f = function("delete-first-0").unwrap();
        assert_eq!(eval(&f, "1001").as_deref(), Some("101"));
        assert_eq!(eval(&f, "0").as_deref(), Some(""));
        assert_eq!(eval(&f, "111").as_deref(), Some("111"));
        assert_eq!(f.slack(), 0);
    }

    #[test]
    fn slack_values() {
        assert_eq!(function("identity").unwrap().slack(), 0);
        let f = function("append-suffix").unwrap();
        assert_eq!(f.slack(), 2);
        assert_eq!(eval(&f, "ba").as_deref(), Some("baab"));
    }

    #[test]
    fn non_functional_relations() {
        let r = AutomaticRelation::new(&equal_length_graph()).unwrap();
        match check_functional(&r).unwrap() {
            Functionality::Counterexample { input, first, second } => {
                assert_eq!(input.len(), first.len());
                assert_eq!(input.len(), second.len());
                assert_ne!(first, second);
                assert_eq!((show(&input), show(&first), show(&second)), ("0".into(), "0".into(), "1".into()));
            }
            other => panic!("{other:?}"),
        }
        let r = AutomaticRelation::new(&prefix_graph()).unwrap();
        assert!(matches!(check_functional(&r).unwrap(), Functionality::Counterexample { .. }));
        assert!(matches!(length_bound(&r), Err(Error::NotFunctional(_))));
        assert!(matches!(AutomaticFunction::new(&prefix_graph()), Err(Error::NotFunctional(_))));
    }

    #[test]
    fn domains() {
        let toks = strings(&["0", "1"]);
        let d = function("delete-first-0").unwrap().domain().unwrap();
        for w in words_up_to(&toks, 5) {
            assert!(d.accepts_atoms(&w));
        }
        let d = function("exchange").unwrap().domain().unwrap();
        assert_eq!(d.num_states(), 1);
        assert!(d.is_accepting(0));
    }

    #[test]
    fn singleton_domain() {
        let al = Alphabet::conv(&[strings(&["a", "b"]), strings(&["a", "b"])]).unwrap();
        let g = build::explore_dfa(&al, 0u8, |&s| s == 2, |&s, sym| {
            let c = sym.components().unwrap();
            match (s, c[0].as_deref(), c[1].as_deref()) {
                (0, Some("a"), Some("b")) => Some(1),
                (1, Some("b"), None) => Some(2),
                _ => None,
            }
        });
        let f = AutomaticFunction::new(&g).unwrap();
        let d = f.domain().unwrap();
        for w in words_up_to(&strings(&["a", "b"]), 4) {
            assert_eq!(d.accepts_atoms(&w), show(&w) == "ab");
        }
        assert_eq!(eval(&f, "ab").as_deref(), Some("b"));
        assert_eq!(eval(&f, "a"), None);
    }

    #[test]
    fn untrack_round_trip() {
        let f = function("identity").unwrap();
        let p = minimize(&determinize(&project(f.graph(), &[0]).unwrap()));
        assert_eq!(retrack(&untrack(&p).unwrap()).unwrap(), p);
    }
}
