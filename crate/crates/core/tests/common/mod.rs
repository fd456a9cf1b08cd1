//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use autolin::automata::{Dfa, Nfa, StateId};
use autolin::families::AutomaticFamily;
use autolin::learning::SessionReport;
use autolin::symbol::{words_up_to, Alphabet, Symbol, Word};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Membership of every index up to `dmax` on every word up to `wmax`,
/// for a brute-force tell-tale check.
pub struct TelltaleOracle {
    /// Words in length-lex order.
    words: Vec<Word>,
    rows: Vec<(Word, Vec<bool>)>,
}

impl TelltaleOracle {
    pub fn new(fam: &AutomaticFamily, dmax: usize, wmax: usize) -> Self {
        let words = words_up_to(fam.word_alphabet(), wmax);
        let g = fam.member_dfa();
        let al = g.alphabet();
        let sym = |e: Option<&String>, x: Option<&String>| al.index_of(&Symbol::Tuple(vec![e.cloned(), x.cloned()]));
        let ia = fam.index_alphabet();
        let wa = fam.word_alphabet();
        // table[e][x] with PAD as the last entry on both sides
        let table: Vec<Vec<Option<usize>>> = (0..=ia.len())
            .map(|e| (0..=wa.len()).map(|x| sym(ia.get(e), wa.get(x))).collect())
            .collect();
        let rows = fam
            .indices_up_to(dmax)
            .into_iter()
            .map(|d| {
                // words come in breadth-first order, so word i extends word (i-1)/k;
                // run conv(d, x) on the member graph sharing those prefixes
                let k = wa.len();
                let di: Vec<usize> = d.iter().map(|t| ia.iter().position(|u| u == t).unwrap()).collect();
                let de = |i: usize| di.get(i).copied().unwrap_or(ia.len());
                let mut states: Vec<Option<StateId>> = Vec::with_capacity(words.len());
                let mut row = Vec::with_capacity(words.len());
                for (i, x) in words.iter().enumerate() {
                    let q = if i == 0 {
                        Some(g.start())
                    } else {
                        let t = (i - 1) % k;
                        states[(i - 1) / k].and_then(|q| table[de(x.len() - 1)][t].map(|a| g.next(q, a)))
                    };
                    states.push(q);
                    row.push(q.is_some_and(|mut q| {
                        for &t in di.iter().skip(x.len()) {
                            q = g.next(q, table[t][k].unwrap());
                        }
                        g.is_accepting(q)
                    }));
                }
                (d, row)
            })
            .collect();
        TelltaleOracle { words, rows }
    }

    /// Some `d` with `L_e ∩ Σ^{≤b} ⊆ L_d` and `L_d ⊊ L_e`, where inclusion
    /// and strictness are judged on words up to `b + 4`. Blockers beyond
    /// `dmax` and differences beyond `b + 4` are outside the oracle's view.
    pub fn blocker(&self, e: &[String], b: usize) -> Option<&Word> {
        let le = &self.rows.iter().find(|(d, _)| d == e)?.1;
        let upto = |n: usize| self.words.iter().take_while(|w| w.len() <= n).count();
        let (slice, horizon) = (upto(b), upto(b + 4));
        self.rows.iter().map(|(d, ld)| (d, ld)).find(|(_, ld)| {
            (0..slice).all(|i| !le[i] || ld[i])
                && (0..horizon).all(|i| !ld[i] || le[i])
                && (0..horizon).any(|i| le[i] && !ld[i])
        }).map(|(d, _)| d)
    }
}

pub fn random_dfa(rng: &mut ChaCha8Rng, al: &Alphabet, n: usize) -> Dfa {
    let accepting = (0..n).map(|_| rng.gen_bool(0.4)).collect();
    let delta = (0..n * al.len()).map(|_| rng.gen_range(0..n)).collect();
    Dfa::from_table(al.clone(), 0, accepting, delta).unwrap()
}

pub fn random_nfa(rng: &mut ChaCha8Rng, al: &Alphabet, n: usize) -> Nfa {
    let mut m = Nfa::new(al.clone(), n);
    m.add_start(0);
    if rng.gen_bool(0.3) {
        m.add_start(rng.gen_range(0..n));
    }
    for q in 0..n {
        m.set_accepting(q, rng.gen_bool(0.35));
        for a in 0..al.len() {
            for r in 0..n {
                if rng.gen_bool(0.3) {
                    m.add_transition(q, a, r);
                }
            }
        }
    }
    m
}

/// Every index word of length at most `len` over `0..k`.
pub fn index_words(k: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..len {
        let next: Vec<Vec<usize>> = layer
            .iter()
            .flat_map(|w: &Vec<usize>| (0..k).map(move |a| [w.as_slice(), &[a]].concat()))
            .collect();
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Budget verdicts recomputed from the raw per-cycle data. Returns the
/// cycles that break either bound.
pub fn budget_breaches(r: &SessionReport) -> Vec<usize> {
    let mut n = 0;
    let mut bad = Vec::new();
    for c in &r.cycles {
        n = n.max(c.datum.len());
        let total: usize = c.steps.values().sum();
        let ok = total <= r.rate * (n + 1) && c.scratch_len <= n + r.slack;
        if !ok || ok != c.within_budget || n != c.n || total != c.total_steps {
            bad.push(c.cycle);
        }
    }
    bad
}
