//! Automata built by exploring implicit state spaces, plus the track-lifting
//! helpers used for multi-track products.

use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::symbol::{joined_tokens, token_parts, Alphabet, Symbol};

use super::{Dfa, Nfa, StateId};

/// Reachable DFA of a deterministic transition function. `step` returning
/// `None` sends the run to a rejecting sink.
pub fn explore_dfa<S, A, F>(alphabet: &Alphabet, init: S, accept: A, step: F) -> Dfa
where
    S: Clone + Eq + Hash,
    A: Fn(&S) -> bool,
    F: Fn(&S, &Symbol) -> Option<S>,
{
    explore_dfa_capped(alphabet, init, accept, step, usize::MAX, "automaton")
        .expect("uncapped exploration")
}

pub fn explore_dfa_capped<S, A, F>(
    alphabet: &Alphabet,
    init: S,
    accept: A,
    step: F,
    cap: usize,
    what: &str,
) -> Result<Dfa>
where
    S: Clone + Eq + Hash,
    A: Fn(&S) -> bool,
    F: Fn(&S, &Symbol) -> Option<S>,
{
    let mut ids: HashMap<S, StateId> = HashMap::new();
    let mut states = vec![init.clone()];
    ids.insert(init, 0);
    let mut edges = Vec::new();
    let mut i = 0;
    while i < states.len() {
        for (a, sym) in alphabet.symbols().iter().enumerate() {
            if let Some(next) = step(&states[i], sym) {
                let id = match ids.get(&next) {
                    Some(&id) => id,
                    None => {
                        if states.len() >= cap {
                            return Err(Error::StateCap { what: what.into(), cap });
                        }
                        let id = states.len();
                        ids.insert(next.clone(), id);
                        states.push(next);
                        id
                    }
                };
                edges.push((i, a, id));
            }
        }
        i += 1;
    }
    let accepting: Vec<StateId> = (0..states.len()).filter(|&q| accept(&states[q])).collect();
    Dfa::from_partial(alphabet.clone(), states.len(), 0, &accepting, edges)
}

/// Reachable NFA of a nondeterministic transition function.
pub fn explore_nfa<S, A, F>(
    alphabet: &Alphabet,
    starts: Vec<S>,
    accept: A,
    step: F,
    cap: usize,
    what: &str,
) -> Result<Nfa>
where
    S: Clone + Eq + Hash,
    A: Fn(&S) -> bool,
    F: Fn(&S, &Symbol) -> Vec<S>,
{
    let mut ids: HashMap<S, StateId> = HashMap::new();
    let mut states: Vec<S> = Vec::new();
    let mut out = Nfa::new(alphabet.clone(), 0);
    let mut intern = |s: S, states: &mut Vec<S>, out: &mut Nfa| -> Result<StateId> {
        if let Some(&id) = ids.get(&s) {
            return Ok(id);
        }
        if states.len() >= cap {
            return Err(Error::StateCap { what: what.into(), cap });
        }
        let id = out.add_state();
        ids.insert(s.clone(), id);
        states.push(s);
        Ok(id)
    };
    for s in starts {
        let id = intern(s, &mut states, &mut out)?;
        out.add_start(id);
    }
    let mut i = 0;
    while i < states.len() {
        if accept(&states[i]) {
            out.set_accepting(i, true);
        }
        for (a, sym) in alphabet.symbols().iter().enumerate() {
            for next in step(&states[i].clone(), sym) {
                let id = intern(next, &mut states, &mut out)?;
                out.add_transition(i, a, id);
            }
        }
        i += 1;
    }
    Ok(out)
}

/// Well-formed convolutions over a convolution alphabet: no track resumes
/// after it has been padded.
pub fn wellformed(alphabet: &Alphabet) -> Result<Dfa> {
    let k = alphabet.arity().ok_or(Error::NotConvolution)?;
    Ok(explore_dfa(alphabet, vec![false; k], |_| true, |ended, s| {
        let parts = s.components().unwrap();
        if parts.iter().all(Option::is_none) {
            return None;
        }
        let mut next = ended.clone();
        for (i, p) in parts.iter().enumerate() {
            match p {
                Some(_) if ended[i] => return None,
                Some(_) => {}
                None => next[i] = true,
            }
        }
        Some(next)
    }))
}

/// Cylindrification: `d` reads tracks `map[0], map[1], ..` of the wider
/// convolution alphabet `target`. The lifted automaton accepts a word iff its
/// restriction to those tracks (trailing all-padded positions removed) is
/// accepted by `d`. Well-formedness of the wide word is not checked here.
pub fn lift(d: &Dfa, target: &Alphabet, map: &[usize]) -> Result<Dfa> {
    let arity = d.alphabet().arity().ok_or(Error::NotConvolution)?;
    let wide = target.arity().ok_or(Error::NotConvolution)?;
    if map.len() != arity || map.iter().any(|&t| t >= wide) {
        return Err(Error::InvalidTracks(format!("map {map:?} does not fit arity {wide}")));
    }
    // symbol translation, computed once
    let trans: Vec<Option<Option<usize>>> = target
        .symbols()
        .iter()
        .map(|s| {
            let parts = s.components().unwrap();
            let proj: Vec<Option<String>> = map.iter().map(|&t| parts[t].clone()).collect();
            if proj.iter().all(Option::is_none) {
                Some(None)
            } else {
                d.alphabet().index_of(&Symbol::Tuple(proj)).map(Some)
            }
        })
        .collect();
    Ok(explore_dfa(
        target,
        (d.start(), false),
        |&(q, _)| d.is_accepting(q),
        |&(q, done), s| {
            let a = target.index_of(s).unwrap();
            match trans[a] {
                Some(None) => Some((q, true)),
                Some(Some(b)) if !done => Some((d.next(q, b), false)),
                _ => None,
            }
        },
    ))
}

/// Packs groups of tracks into single tracks of joined tokens (`"a|_"`);
/// a group of one track keeps its plain tokens. Every track must appear in
/// exactly one group.
pub fn regroup(d: &Dfa, groups: &[Vec<usize>]) -> Result<Dfa> {
    let tracks = d.alphabet().tracks().ok_or(Error::NotConvolution)?;
    let mut seen: Vec<usize> = groups.concat();
    seen.sort_unstable();
    if seen != (0..tracks.len()).collect::<Vec<_>>() {
        return Err(Error::InvalidTracks(format!("groups {groups:?} do not partition {} tracks", tracks.len())));
    }
    let wide: Vec<Vec<String>> = groups
        .iter()
        .map(|g| match g.as_slice() {
            [t] => Ok(tracks[*t].clone()),
            _ => joined_tokens(&g.iter().map(|&t| tracks[t].clone()).collect::<Vec<_>>()),
        })
        .collect::<Result<_>>()?;
    let target = Alphabet::conv(&wide)?;
    let trans: Vec<Option<usize>> = target
        .symbols()
        .iter()
        .map(|s| {
            let mut src: Vec<Option<String>> = vec![None; tracks.len()];
            for (g, c) in groups.iter().zip(s.components().unwrap()) {
                let Some(tok) = c else { continue };
                if g.len() == 1 {
                    src[g[0]] = Some(tok.clone());
                } else {
                    for (&t, p) in g.iter().zip(token_parts(tok)) {
                        src[t] = p.map(str::to_string);
                    }
                }
            }
            d.alphabet().index_of(&Symbol::Tuple(src))
        })
        .collect();
    Ok(explore_dfa(&target, d.start(), |&q| d.is_accepting(q), |&q, s| {
        Some(d.next(q, trans[target.index_of(s).unwrap()]?))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::{convolve, strings, word, words_up_to};

    #[test]
    fn wellformed_rejects_resumed_track() {
        let tr = vec![strings(&["0", "1"]), strings(&["0", "1"])];
        let al = Alphabet::conv(&tr).unwrap();
        let wf = wellformed(&al).unwrap();
        assert!(wf.accepts(&convolve(&[word("01"), word("1")], &tr).unwrap()));
        let bad = vec![Symbol::tuple(&[None, Some("1")]), Symbol::tuple(&[Some("0"), Some("1")])];
        assert!(!wf.accepts(&bad));
    }

    #[test]
    fn lift_matches_restriction() {
        let t1 = vec![strings(&["0", "1"])];
        let one = Alphabet::conv(&t1).unwrap();
        // words with an even number of 1s
        let s0 = one.index_of(&Symbol::tuple(&[Some("0")])).unwrap();
        let s1 = one.index_of(&Symbol::tuple(&[Some("1")])).unwrap();
        let even = Dfa::from_partial(one, 2, 0, &[0], [(0, s0, 0), (0, s1, 1), (1, s0, 1), (1, s1, 0)])
            .unwrap();
        let t2 = vec![strings(&["0", "1"]), strings(&["0", "1"])];
        let two = Alphabet::conv(&t2).unwrap();
        let lifted = lift(&even, &two, &[1]).unwrap();
        let ws = words_up_to(&strings(&["0", "1"]), 3);
        for x in &ws {
            for y in &ws {
                let c = convolve(&[x.clone(), y.clone()], &t2).unwrap();
                let expect = y.iter().filter(|t| *t == "1").count() % 2 == 0;
                assert_eq!(lifted.accepts(&c), expect, "{x:?} {y:?}");
            }
        }
    }
}
