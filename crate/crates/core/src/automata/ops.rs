//! Regular-language algebra: subset construction, minimization, products,
//! emptiness, equivalence, projection and quotients.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::symbol::{Alphabet, Symbol};

use super::{Dfa, Nfa, StateId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoolOp {
    And,
    Or,
    Diff,
}

/// Subset construction over the reachable subsets. The empty subset, when
/// reachable, becomes the sink.
pub fn determinize(n: &Nfa) -> Dfa {
    let k = n.alphabet().len();
    let mut ids: HashMap<Vec<StateId>, StateId> = HashMap::new();
    let mut subsets: Vec<Vec<StateId>> = Vec::new();
    let start = n.starts().to_vec();
    ids.insert(start.clone(), 0);
    subsets.push(start);
    let mut delta: Vec<StateId> = Vec::new();
    let mut mark = vec![false; n.num_states()];
    let mut i = 0;
    while i < subsets.len() {
        for a in 0..k {
            let mut next = Vec::new();
            for &q in &subsets[i] {
                for &r in n.successors(q, a) {
                    if !mark[r] {
                        mark[r] = true;
                        next.push(r);
                    }
                }
            }
            for &r in &next {
                mark[r] = false;
            }
            next.sort_unstable();
            let id = match ids.get(&next) {
                Some(&id) => id,
                None => {
                    let id = subsets.len();
                    ids.insert(next.clone(), id);
                    subsets.push(next);
                    id
                }
            };
            delta.push(id);
        }
        i += 1;
    }
    let accepting = subsets
        .iter()
        .map(|s| s.iter().any(|&q| n.is_accepting(q)))
        .collect();
    Dfa::from_table(n.alphabet().clone(), 0, accepting, delta).expect("subset table is total")
}

/// Minimal DFA by partition refinement on the reachable part. States are
/// renumbered breadth-first from the start in alphabet order, so two minimal
/// DFAs of the same language over the same alphabet are identical.
pub fn minimize(d: &Dfa) -> Dfa {
    let k = d.alphabet().len();
    let reach = d.reachable();
    let states: Vec<StateId> = (0..d.num_states()).filter(|&q| reach[q]).collect();
    let mut class = vec![usize::MAX; d.num_states()];
    for &q in &states {
        class[q] = usize::from(d.is_accepting(q));
    }
    let mut count = {
        let mut c: Vec<usize> = states.iter().map(|&q| class[q]).collect();
        c.sort_unstable();
        c.dedup();
        c.len()
    };
    loop {
        let mut sig_ids: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut next = vec![usize::MAX; d.num_states()];
        let mut sig = Vec::with_capacity(k + 1);
        for &q in &states {
            sig.clear();
            sig.push(class[q]);
            sig.extend((0..k).map(|a| class[d.next(q, a)]));
            let len = sig_ids.len();
            next[q] = *sig_ids.entry(sig.clone()).or_insert(len);
        }
        let new_count = sig_ids.len();
        class = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }
    // canonical renumbering
    let mut order = vec![usize::MAX; count];
    let mut reps = Vec::with_capacity(count);
    let mut queue = VecDeque::from([d.start()]);
    order[class[d.start()]] = 0;
    reps.push(d.start());
    while let Some(q) = queue.pop_front() {
        for a in 0..k {
            let r = d.next(q, a);
            if order[class[r]] == usize::MAX {
                order[class[r]] = reps.len();
                reps.push(r);
                queue.push_back(r);
            }
        }
    }
    let mut delta = Vec::with_capacity(reps.len() * k);
    for &q in &reps {
        for a in 0..k {
            delta.push(order[class[d.next(q, a)]]);
        }
    }
    let accepting = reps.iter().map(|&q| d.is_accepting(q)).collect();
    Dfa::from_table(d.alphabet().clone(), 0, accepting, delta).expect("minimal table is total")
}

pub fn complement(d: &Dfa) -> Dfa {
    let accepting = d.accepting().iter().map(|a| !a).collect();
    Dfa::with_names(
        d.alphabet().clone(),
        d.names().to_vec(),
        d.start(),
        accepting,
        d.table().to_vec(),
    )
    .expect("same shape")
}

/// Reachable product automaton.
pub fn boolean(op: BoolOp, a: &Dfa, b: &Dfa) -> Result<Dfa> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let k = a.alphabet().len();
    let mut ids: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut pairs = vec![(a.start(), b.start())];
    ids.insert(pairs[0], 0);
    let mut delta = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let (p, q) = pairs[i];
        for s in 0..k {
            let pair = (a.next(p, s), b.next(q, s));
            let id = *ids.entry(pair).or_insert_with(|| {
                pairs.push(pair);
                pairs.len() - 1
            });
            delta.push(id);
        }
        i += 1;
    }
    let accepting = pairs
        .iter()
        .map(|&(p, q)| {
            let (x, y) = (a.is_accepting(p), b.is_accepting(q));
            match op {
                BoolOp::And => x && y,
                BoolOp::Or => x || y,
                BoolOp::Diff => x && !y,
            }
        })
        .collect();
    Dfa::from_table(a.alphabet().clone(), 0, accepting, delta)
}

pub fn intersect(a: &Dfa, b: &Dfa) -> Result<Dfa> {
    boolean(BoolOp::And, a, b)
}

/// Intersection of several automata, minimized after each product.
pub fn intersect_all(parts: &[&Dfa]) -> Result<Dfa> {
    let (first, rest) = parts
        .split_first()
        .ok_or_else(|| Error::InvalidAutomaton("empty intersection".into()))?;
    let mut acc = minimize(first);
    for p in rest {
        acc = minimize(&intersect(&acc, p)?);
    }
    Ok(acc)
}

/// Shortest accepted word (breadth-first, ties broken by alphabet order), as
/// symbol indices.
pub fn shortest_accepted(d: &Dfa) -> Option<Vec<usize>> {
    let k = d.alphabet().len();
    let mut parent: Vec<Option<(StateId, usize)>> = vec![None; d.num_states()];
    let mut seen = vec![false; d.num_states()];
    let mut queue = VecDeque::from([d.start()]);
    seen[d.start()] = true;
    while let Some(q) = queue.pop_front() {
        if d.is_accepting(q) {
            let mut w = Vec::new();
            let mut cur = q;
            while let Some((p, a)) = parent[cur] {
                w.push(a);
                cur = p;
            }
            w.reverse();
            return Some(w);
        }
        for a in 0..k {
            let r = d.next(q, a);
            if !seen[r] {
                seen[r] = true;
                parent[r] = Some((q, a));
                queue.push_back(r);
            }
        }
    }
    None
}

/// `None` when the language is empty, otherwise a shortest witness.
pub fn is_empty(d: &Dfa) -> Option<Vec<Symbol>> {
    shortest_accepted(d).map(|w| d.alphabet().decode(&w))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equivalence {
    pub equal: bool,
    pub counterexample: Option<Vec<Symbol>>,
}

/// Language equality with a shortest distinguishing word.
pub fn equivalent(a: &Dfa, b: &Dfa) -> Result<Equivalence> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let sym = boolean(BoolOp::Or, &boolean(BoolOp::Diff, a, b)?, &boolean(BoolOp::Diff, b, a)?)?;
    let cex = is_empty(&sym);
    Ok(Equivalence { equal: cex.is_none(), counterexample: cex })
}

/// Existential projection of a convolution automaton onto the tracks in
/// `keep` (in the given order). A word over the kept tracks is accepted iff
/// some completion on the dropped tracks is accepted; positions where every
/// kept track is padded can only form a tail, so they are absorbed into the
/// acceptance condition.
pub fn project(d: &Dfa, keep: &[usize]) -> Result<Nfa> {
    let tracks = d.alphabet().tracks().ok_or(Error::NotConvolution)?;
    if keep.is_empty() {
        return Err(Error::InvalidTracks("keep set is empty".into()));
    }
    if let Some(&bad) = keep.iter().find(|&&t| t >= tracks.len()) {
        return Err(Error::InvalidTracks(format!("track {bad} out of range")));
    }
    let kept: Vec<Vec<String>> = keep.iter().map(|&t| tracks[t].clone()).collect();
    let target = Alphabet::conv(&kept)?;
    let n = d.num_states();
    let mut out = Nfa::new(target.clone(), n);
    out.add_start(d.start());
    let mut tail_edges: Vec<Vec<StateId>> = vec![Vec::new(); n];
    for (a, s) in d.alphabet().symbols().iter().enumerate() {
        let parts = s.components().unwrap();
        let proj: Vec<Option<String>> = keep.iter().map(|&t| parts[t].clone()).collect();
        if proj.iter().all(Option::is_none) {
            for q in 0..n {
                tail_edges[q].push(d.next(q, a));
            }
        } else {
            let b = target.index_of(&Symbol::Tuple(proj)).expect("kept components are in range");
            for q in 0..n {
                out.add_transition(q, b, d.next(q, a));
            }
        }
    }
    // q accepts in the projection iff a padded tail leads to acceptance
    let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); n];
    for (q, succ) in tail_edges.iter().enumerate() {
        for &r in succ {
            preds[r].push(q);
        }
    }
    let mut good: Vec<bool> = (0..n).map(|q| d.is_accepting(q)).collect();
    let mut stack: Vec<StateId> = (0..n).filter(|&q| good[q]).collect();
    while let Some(q) = stack.pop() {
        for &p in &preds[q] {
            if !good[p] {
                good[p] = true;
                stack.push(p);
            }
        }
    }
    for (q, g) in good.into_iter().enumerate() {
        out.set_accepting(q, g);
    }
    Ok(out)
}

/// Drops states that are unreachable or cannot reach acceptance.
pub fn trim(n: &Nfa) -> Nfa {
    let k = n.alphabet().len();
    let mut reach = vec![false; n.num_states()];
    let mut stack: Vec<StateId> = n.starts().to_vec();
    for &q in &stack {
        reach[q] = true;
    }
    while let Some(q) = stack.pop() {
        for a in 0..k {
            for &r in n.successors(q, a) {
                if !reach[r] {
                    reach[r] = true;
                    stack.push(r);
                }
            }
        }
    }
    let live = n.coreachable();
    let mut id = vec![usize::MAX; n.num_states()];
    let mut count = 0;
    for q in 0..n.num_states() {
        if reach[q] && live[q] {
            id[q] = count;
            count += 1;
        }
    }
    let mut out = Nfa::new(n.alphabet().clone(), count);
    for q in (0..n.num_states()).filter(|&q| id[q] != usize::MAX) {
        out.set_accepting(id[q], n.is_accepting(q));
        for a in 0..k {
            for &r in n.successors(q, a) {
                if id[r] != usize::MAX {
                    out.add_transition(id[q], a, id[r]);
                }
            }
        }
    }
    for &q in n.starts() {
        if id[q] != usize::MAX {
            out.add_start(id[q]);
        }
    }
    out
}

/// Accepts exactly the prefixes of accepted words.
pub fn prefix_closure(n: &Nfa) -> Nfa {
    let live = n.coreachable();
    let mut out = n.clone();
    for (q, l) in live.into_iter().enumerate() {
        out.set_accepting(q, l);
    }
    out
}

/// Right quotient by one symbol: accepts `z` iff `z·s` is accepted.
pub fn right_quotient_symbol(n: &Nfa, s: &Symbol) -> Result<Nfa> {
    let a = n
        .alphabet()
        .index_of(s)
        .ok_or_else(|| Error::UnknownSymbol(s.to_string()))?;
    let mut out = n.clone();
    for q in 0..n.num_states() {
        let acc = n.successors(q, a).iter().any(|&r| n.is_accepting(r));
        out.set_accepting(q, acc);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::build;
    use crate::symbol::{strings, words_up_to, Symbol};

    fn ab() -> Alphabet {
        Alphabet::atoms(&["a", "b"]).unwrap()
    }

    // a*
    fn a_star(with_dead: bool) -> Dfa {
        if with_dead {
            Dfa::from_partial(ab(), 2, 0, &[0], [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 1)]).unwrap()
        } else {
            Dfa::from_partial(ab(), 1, 0, &[0], [(0, 0, 0)]).unwrap()
        }
    }

    // a*b
    fn a_star_b() -> Dfa {
        Dfa::from_partial(ab(), 2, 0, &[1], [(0, 0, 0), (0, 1, 1)]).unwrap()
    }

    fn atoms(s: &str) -> Vec<Symbol> {
        s.chars().map(|c| Symbol::atom(c.to_string())).collect()
    }

    #[test]
    fn equivalent_examples() {
        let e = equivalent(&minimize(&a_star(false)), &a_star(true)).unwrap();
        assert!(e.equal);
        let e = equivalent(&a_star(false), &a_star_b()).unwrap();
        assert!(!e.equal);
        assert_eq!(e.counterexample, Some(vec![]));
    }

    #[test]
    fn alphabet_mismatch_is_rejected() {
        let other = Dfa::from_partial(Alphabet::atoms(&["a"]).unwrap(), 1, 0, &[0], []).unwrap();
        assert_eq!(boolean(BoolOp::And, &a_star(false), &other), Err(Error::AlphabetMismatch));
        assert!(equivalent(&a_star(false), &other).is_err());
    }

    #[test]
    fn shortest_witness_is_length_lex_first() {
        // words containing b: shortest witness "b"
        let d = Dfa::from_partial(ab(), 2, 0, &[1], [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 1)])
            .unwrap();
        assert_eq!(is_empty(&d), Some(atoms("b")));
        let empty = Dfa::from_partial(ab(), 1, 0, &[], []).unwrap();
        assert_eq!(is_empty(&empty), None);
    }

    fn nfa_ab() -> Nfa {
        // {ab}
        let mut n = Nfa::new(ab(), 3);
        n.add_start(0);
        n.add_transition(0, 0, 1);
        n.add_transition(1, 1, 2);
        n.set_accepting(2, true);
        n
    }

    #[test]
    fn prefix_closure_examples() {
        let p = prefix_closure(&nfa_ab());
        for (w, expect) in [("", true), ("a", true), ("ab", true), ("b", false), ("aa", false)] {
            assert_eq!(p.accepts(&atoms(w)), expect, "{w}");
        }
        let empty = Nfa::new(ab(), 1);
        let p = prefix_closure(&empty);
        assert!(!p.accepts(&[]));
        // a*b, enumerated to length 4
        let p = prefix_closure(&a_star_b().to_nfa());
        let toks = strings(&["a", "b"]);
        for w in words_up_to(&toks, 4) {
            let s: String = w.concat();
            let expect = s.chars().all(|c| c == 'a') || (s.ends_with('b') && s[..s.len() - 1].chars().all(|c| c == 'a'));
            assert_eq!(p.accepts(&atoms(&s)), expect, "{s}");
        }
    }

    #[test]
    fn right_quotient_examples() {
        let b = Symbol::atom("b");
        let a = Symbol::atom("a");
        let q = right_quotient_symbol(&nfa_ab(), &b).unwrap();
        assert!(q.accepts(&atoms("a")));
        assert!(!q.accepts(&atoms("")));
        let q = right_quotient_symbol(&nfa_ab(), &a).unwrap();
        assert!(is_empty(&determinize(&q)).is_none());
        let q = right_quotient_symbol(&a_star_b().to_nfa(), &b).unwrap();
        for w in words_up_to(&strings(&["a", "b"]), 4) {
            let s: String = w.concat();
            assert_eq!(q.accepts(&atoms(&s)), !s.contains('b'), "{s}");
        }
        assert!(right_quotient_symbol(&nfa_ab(), &Symbol::atom("c")).is_err());
    }

    fn bin_tracks(k: usize) -> Vec<Vec<String>> {
        vec![strings(&["0", "1"]); k]
    }

    #[test]
    fn project_identity_domain() {
        let al = Alphabet::conv(&bin_tracks(2)).unwrap();
        let id = build::explore_dfa(&al, (), |_| true, |_, s| {
            let c = s.components().unwrap();
            (c[0].is_some() && c[0] == c[1]).then_some(())
        });
        let p = determinize(&project(&id, &[0]).unwrap());
        for w in words_up_to(&strings(&["0", "1"]), 5) {
            let conv: Vec<Symbol> = w.iter().map(|t| Symbol::tuple(&[Some(t.as_str())])).collect();
            assert!(p.accepts(&conv));
        }
        assert!(matches!(project(&id, &[]), Err(Error::InvalidTracks(_))));
        assert!(matches!(project(&id, &[2]), Err(Error::InvalidTracks(_))));
        assert_eq!(project(&a_star(false), &[0]).unwrap_err(), Error::NotConvolution);
    }

    #[test]
    fn project_equal_length_relation() {
        let al = Alphabet::conv(&bin_tracks(2)).unwrap();
        let eq = build::explore_dfa(&al, (), |_| true, |_, s| {
            let c = s.components().unwrap();
            (c[0].is_some() && c[1].is_some()).then_some(())
        });
        let p = determinize(&project(&eq, &[1]).unwrap());
        for w in words_up_to(&strings(&["0", "1"]), 5) {
            let conv: Vec<Symbol> = w.iter().map(|t| Symbol::tuple(&[Some(t.as_str())])).collect();
            assert!(p.accepts(&conv));
        }
    }

    #[test]
    fn project_singleton_domain() {
        // graph of f with dom(f) = {"ab"}, f(ab) = "b"
        let al = Alphabet::conv(&[strings(&["a", "b"]), strings(&["a", "b"])]).unwrap();
        let s1 = al.index_of(&Symbol::tuple(&[Some("a"), Some("b")])).unwrap();
        let s2 = al.index_of(&Symbol::tuple(&[Some("b"), None])).unwrap();
        let g = Dfa::from_partial(al, 3, 0, &[2], [(0, s1, 1), (1, s2, 2)]).unwrap();
        let p = determinize(&project(&g, &[0]).unwrap());
        let one = |w: &str| -> Vec<Symbol> { w.chars().map(|c| Symbol::tuple(&[Some(c.to_string())])).collect() };
        assert!(p.accepts(&one("ab")));
        assert!(!p.accepts(&one("a")));
        assert!(!p.accepts(&one("abb")));
        assert!(!p.accepts(&one("")));
    }
}
