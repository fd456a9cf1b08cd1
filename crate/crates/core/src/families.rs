//! Automatic families of languages and tell-tale analysis.

use serde::{Deserialize, Serialize};

use crate::autofn::{retrack, untrack, AutomaticRelation};
use crate::automata::json::{self, AutomatonJson};
use crate::automata::{
    build, complement, determinize, equivalent, intersect_all, is_empty, minimize, project, Dfa,
};
use crate::error::{Error, Result};
use crate::symbol::{show, words_up_to, Alphabet, Symbol, Word};

/// An index set `I` with a membership relation `{conv(e,x) : e ∈ I, x ∈ L_e}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomaticFamily {
    index_dfa: Dfa,
    member: AutomaticRelation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub index_dfa: AutomatonJson,
    pub member_dfa: AutomatonJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonemptyReport {
    pub passed: bool,
    /// Shortest index with an empty language.
    pub dead_index: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TelltaleEntry {
    pub index: String,
    /// Least `b` whose slice `L_e ∩ Σ^{≤b}` is a tell-tale.
    pub level: Option<usize>,
    /// Some `d` with `D ⊆ L_d ⊂ L_e` at the largest level tried.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TelltaleReport {
    pub index_len: usize,
    pub b_max: usize,
    pub entries: Vec<TelltaleEntry>,
}

impl TelltaleReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.level.is_some())
    }

    pub fn entry(&self, index: &str) -> Option<&TelltaleEntry> {
        self.entries.iter().find(|e| e.index == index)
    }
}

impl AutomaticFamily {
    /// `index_dfa` over plain index tokens, `member_dfa` over the
    /// convolution of index tokens and word tokens. Pairs whose index lies
    /// outside `I` are dropped from the membership relation.
    pub fn new(index_dfa: &Dfa, member_dfa: &Dfa) -> Result<Self> {
        let idx_tokens = index_dfa
            .alphabet()
            .tokens()
            .ok_or_else(|| Error::InvalidAutomaton("index automaton must use plain tokens".into()))?;
        let rel = AutomaticRelation::new(member_dfa)?;
        if rel.arity() != 2 || rel.tracks()[0] != idx_tokens {
            return Err(Error::InvalidAutomaton(
                "membership automaton must read (index, word) pairs over the index alphabet".into(),
            ));
        }
        let al = rel.graph().alphabet().clone();
        let in_i = build::lift(&retrack(index_dfa)?, &al, &[0])?;
        let member = AutomaticRelation::new(&intersect_all(&[rel.graph(), &in_i])?)?;
        Ok(AutomaticFamily { index_dfa: minimize(index_dfa), member })
    }

    pub fn index_alphabet(&self) -> &[String] {
        &self.member.tracks()[0]
    }

    pub fn word_alphabet(&self) -> &[String] {
        &self.member.tracks()[1]
    }

    pub fn index_dfa(&self) -> &Dfa {
        &self.index_dfa
    }

    pub fn member_dfa(&self) -> &Dfa {
        self.member.graph()
    }

    pub fn is_index(&self, e: &[String]) -> bool {
        self.index_dfa.accepts_atoms(e)
    }

    pub fn contains(&self, e: &[String], x: &[String]) -> bool {
        self.member.contains(&[e.to_vec(), x.to_vec()])
    }

    /// Indices of length at most `len`, in length-lex order.
    pub fn indices_up_to(&self, len: usize) -> Vec<Word> {
        words_up_to(self.index_alphabet(), len).into_iter().filter(|e| self.is_index(e)).collect()
    }

    fn pair_alphabet(&self) -> &Alphabet {
        self.member.graph().alphabet()
    }

    /// Minimal DFA of `L_e` over the word alphabet.
    pub fn language_of(&self, e: &[String]) -> Result<Dfa> {
        if !self.is_index(e) {
            return Err(Error::NotAnIndex(show(e)));
        }
        let g = self.member.graph();
        let pal = g.alphabet();
        let sym = |a: Option<&String>, b: Option<&String>| pal.index_of(&Symbol::Tuple(vec![a.cloned(), b.cloned()]));
        let atoms = Alphabet::atoms(self.word_alphabet())?;
        // state: graph state after reading i symbols of conv(e, x)
        let d = build::explore_dfa(
            &atoms,
            (g.start(), 0usize),
            |&(q, i)| {
                let mut q = q;
                for t in &e[i.min(e.len())..] {
                    q = g.next(q, sym(Some(t), None).unwrap());
                }
                g.is_accepting(q)
            },
            |&(q, i), s| {
                let Symbol::Atom(x) = s else { return None };
                let a = sym(e.get(i), Some(x))?;
                Some((g.next(q, a), (i + 1).min(e.len())))
            },
        );
        Ok(minimize(&d))
    }

    pub fn index_equivalent(&self, e: &[String], f: &[String]) -> Result<bool> {
        Ok(equivalent(&self.language_of(e)?, &self.language_of(f)?)?.equal)
    }

    /// Indices that occur in some member pair, as a DFA over index tokens.
    fn live_indices(&self) -> Result<Dfa> {
        untrack(&minimize(&determinize(&project(self.member.graph(), &[0])?)))
    }

    pub fn validate_nonempty(&self) -> Result<NonemptyReport> {
        let live = self.live_indices()?;
        let dead = intersect_all(&[&self.index_dfa, &complement(&live)])?;
        let dead_index = is_empty(&dead).map(|w| show(&atoms_of(&w)));
        Ok(NonemptyReport { passed: dead_index.is_none(), dead_index })
    }

    /// `{d ∈ I : L_d ⊆ L_e}`.
    pub fn subset_index_set(&self, e: &[String]) -> Result<Dfa> {
        let le = self.language_of(e)?;
        let pal = self.pair_alphabet();
        let outside = build::lift(&retrack(&complement(&le))?, pal, &[1])?;
        let escapes = intersect_all(&[self.member.graph(), &outside])?;
        let not_sub = untrack(&minimize(&determinize(&project(&escapes, &[0])?)))?;
        intersect_all(&[&self.index_dfa, &complement(&not_sub)])
    }

    /// Pairs `conv(e, d)` of indices where `d` blocks the slice
    /// `L_e ∩ Σ^{≤b}` from being a tell-tale for `L_e`.
    pub fn blocker_relation(&self, b: usize) -> Result<Dfa> {
        let idx = self.index_alphabet().to_vec();
        let sigma = self.word_alphabet().to_vec();
        let al3 = Alphabet::conv(&[idx.clone(), idx.clone(), sigma])?;
        let al2 = Alphabet::conv(&[idx.clone(), idx])?;
        let wf3 = build::wellformed(&al3)?;
        let in_e = build::lift(self.member.graph(), &al3, &[0, 2])?;
        let in_d = build::lift(self.member.graph(), &al3, &[1, 2])?;
        let short = build::explore_dfa(&al3, 0usize, |_| true, |&n, s| {
            let n = n + usize::from(s.components().unwrap()[2].is_some());
            (n <= b).then_some(n)
        });
        let exists_x = |parts: &[&Dfa]| -> Result<Dfa> {
            let p = intersect_all(parts)?;
            Ok(minimize(&determinize(&project(&p, &[0, 1])?)))
        };
        let not_d = complement(&in_d);
        let not_e = complement(&in_e);
        // some short word of L_e is missing from L_d
        let misses_slice = exists_x(&[&wf3, &short, &in_e, &not_d])?;
        // L_d has a word outside L_e
        let not_subset = exists_x(&[&wf3, &in_d, &not_e])?;
        // L_e has a word outside L_d
        let strict = exists_x(&[&wf3, &in_e, &not_d])?;
        let ii = retrack(&self.index_dfa)?;
        let both = intersect_all(&[
            &build::wellformed(&al2)?,
            &build::lift(&ii, &al2, &[0])?,
            &build::lift(&ii, &al2, &[1])?,
        ])?;
        intersect_all(&[&both, &strict, &complement(&misses_slice), &complement(&not_subset)])
    }

    /// `{e ∈ I : L_e ∩ Σ^{≤b}` is a tell-tale for `L_e}`.
    pub fn telltale_level_set(&self, b: usize) -> Result<Dfa> {
        let blocked = untrack(&minimize(&determinize(&project(&self.blocker_relation(b)?, &[0])?)))?;
        intersect_all(&[&self.index_dfa, &complement(&blocked)])
    }

    /// Shortest `d` (length-lex) that blocks `e` at level `b`.
    pub fn blocking_witness(&self, e: &[String], b: usize) -> Result<Option<Word>> {
        self.witness_in(&self.blocker_relation(b)?, e)
    }

    fn witness_in(&self, blockers: &Dfa, e: &[String]) -> Result<Option<Word>> {
        let al2 = blockers.alphabet();
        let fixed = build::explore_dfa(al2, 0usize, |&i| i == e.len(), |&i, s| {
            let c = s.components().unwrap();
            match (&c[0], e.get(i)) {
                (Some(t), Some(u)) if t == u => Some(i + 1),
                (None, None) => Some(i),
                _ => None,
            }
        });
        let rows = intersect_all(&[blockers, &fixed])?;
        let ds = untrack(&minimize(&determinize(&project(&rows, &[1])?)))?;
        Ok(is_empty(&ds).map(|w| atoms_of(&w)))
    }

    /// Least certifying level for each index up to `index_len`, searching
    /// `b ≤ b_max`, with a blocking witness for the indices left uncertified.
    pub fn learnability_scan(&self, index_len: usize, b_max: usize) -> Result<TelltaleReport> {
        let levels: Vec<Dfa> = (0..=b_max).map(|b| self.telltale_level_set(b)).collect::<Result<_>>()?;
        let top = self.blocker_relation(b_max)?;
        let mut entries = Vec::new();
        for e in self.indices_up_to(index_len) {
            let level = levels.iter().position(|d| d.accepts_atoms(&e));
            let witness = match level {
                Some(_) => None,
                None => self.witness_in(&top, &e)?.map(|d| show(&d)),
            };
            entries.push(TelltaleEntry { index: show(&e), level, witness });
        }
        Ok(TelltaleReport { index_len, b_max, entries })
    }

    pub fn to_json(&self) -> FamilyJson {
        FamilyJson {
            index_dfa: AutomatonJson::from_dfa(&self.index_dfa),
            member_dfa: AutomatonJson::from_dfa(self.member.graph()),
        }
    }

    pub fn to_json_string(&self) -> String {
        json::render(&self.to_json())
    }

    pub fn from_json(j: &FamilyJson) -> Result<Self> {
        Self::new(&j.index_dfa.to_dfa()?, &j.member_dfa.to_dfa()?)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Self::from_json(&json::parse(text)?)
    }
}

fn atoms_of(w: &[Symbol]) -> Word {
    w.iter()
        .map(|s| match s {
            Symbol::Atom(t) => t.clone(),
            Symbol::Tuple(c) => c[0].clone().unwrap_or_default(),
        })
        .collect()
}

/// Built-in families.
pub mod fixtures {
    use super::*;
    use crate::symbol::{joined_tokens, strings};

    pub const NAMES: [&str; 6] = ["extensions", "intervals", "length-excl", "thm35", "complement-singleton", "gold"];
    /// Families that violate an invariant on purpose.
    pub const NEGATIVE: [&str; 1] = ["dead-index"];

    fn pair(s: &Symbol) -> (Option<&str>, Option<&str>) {
        let c = s.components().unwrap();
        (c[0].as_deref(), c[1].as_deref())
    }

    fn all_words(tokens: &[String]) -> Dfa {
        build::explore_dfa(&Alphabet::atoms(tokens).unwrap(), (), |_| true, |_, _| Some(()))
    }

    fn family<S, A, F>(index: Dfa, sigma: &[String], init: S, accept: A, step: F) -> AutomaticFamily
    where
        S: Clone + Eq + std::hash::Hash,
        A: Fn(&S) -> bool,
        F: Fn(&S, Option<&str>, Option<&str>) -> Option<S>,
    {
        let idx = index.alphabet().tokens().unwrap();
        let al = Alphabet::conv(&[idx, sigma.to_vec()]).unwrap();
        let m = build::explore_dfa(&al, init, accept, |q, s| {
            let (e, x) = pair(s);
            step(q, e, x)
        });
        AutomaticFamily::new(&index, &m).unwrap()
    }

    /// `L_e = e·{0,1}*`, `I = {0,1}*`.
    pub fn extensions() -> AutomaticFamily {
        let b = strings(&["0", "1"]);
        family(all_words(&b), &b, false, |_| true, |&ended, e, x| match (e, x) {
            (Some(a), Some(c)) if !ended && a == c => Some(false),
            (None, Some(_)) => Some(true),
            _ => None,
        })
    }

    /// Lexicographic `u ≤ v` over a two-track convolution.
    fn lex_le(al: &Alphabet, order: &[String], u: usize, v: usize) -> Dfa {
        let rank = |t: &str| order.iter().position(|o| o == t).unwrap();
        // 0 equal so far, 1 less, 2 greater
        build::explore_dfa(al, 0u8, |&s| s < 2, move |&s, sym| {
            if s != 0 {
                return Some(s);
            }
            let c = sym.components().unwrap();
            Some(match (c[u].as_deref(), c[v].as_deref()) {
                (Some(a), Some(b)) => match rank(a).cmp(&rank(b)) {
                    std::cmp::Ordering::Less => 1,
                    std::cmp::Ordering::Equal => 0,
                    std::cmp::Ordering::Greater => 2,
                },
                (None, Some(_)) => 1,
                (Some(_), None) => 2,
                (None, None) => 0,
            })
        })
    }

    /// Closed lexicographic intervals over `{a,b}`, indexed by
    /// `conv(lo, hi)` written with joined tokens such as `"a|b"`.
    pub fn intervals() -> AutomaticFamily {
        let sigma = strings(&["a", "b"]);
        let two = Alphabet::conv(&[sigma.clone(), sigma.clone()]).unwrap();
        let le2 = intersect_all(&[&lex_le(&two, &sigma, 0, 1), &build::wellformed(&two).unwrap()]).unwrap();
        let index = regroup_to_atoms(&le2);
        let three = Alphabet::conv(&[sigma.clone(), sigma.clone(), sigma.clone()]).unwrap();
        let inside = intersect_all(&[
            &lex_le(&three, &sigma, 0, 1),
            &lex_le(&three, &sigma, 0, 2),
            &lex_le(&three, &sigma, 2, 1),
            &build::wellformed(&three).unwrap(),
        ])
        .unwrap();
        let idx = joined_tokens(&[sigma.clone(), sigma.clone()]).unwrap();
        let pal = Alphabet::conv(&[idx, sigma]).unwrap();
        // (lo, hi, x) read as ("lo|hi", x)
        let m = build::explore_dfa(&pal, inside.start(), |&q| inside.is_accepting(q), |&q, s| {
            let (e, x) = pair(s);
            let mut c: Vec<Option<String>> = match e {
                Some(t) => crate::symbol::token_parts(t).into_iter().map(|p| p.map(str::to_string)).collect(),
                None => vec![None, None],
            };
            c.push(x.map(str::to_string));
            let a = three.index_of(&Symbol::Tuple(c))?;
            Some(inside.next(q, a))
        });
        AutomaticFamily::new(&index, &m).unwrap()
    }

    /// Two-track DFA relabelled with joined tokens.
    fn regroup_to_atoms(d: &Dfa) -> Dfa {
        let tracks = d.alphabet().tracks().unwrap();
        let toks = joined_tokens(&tracks).unwrap();
        let atoms = Alphabet::atoms(&toks).unwrap();
        build::explore_dfa(&atoms, d.start(), |&q| d.is_accepting(q), |&q, s| {
            let Symbol::Atom(t) = s else { return None };
            let c = crate::symbol::token_parts(t).into_iter().map(|p| p.map(str::to_string)).collect();
            Some(d.next(q, d.alphabet().index_of(&Symbol::Tuple(c))?))
        })
    }

    /// `L_e = {x : |x| ≠ |e|}` over `{0,1}`, `I = 0*`.
    pub fn length_excl() -> AutomaticFamily {
        let zeros = all_words(&strings(&["0"]));
        // 0 same length so far, 1 lengths differ
        family(zeros, &strings(&["0", "1"]), 0u8, |&s| s == 1, |&s, e, x| match (e, x) {
            (Some(_), Some(_)) if s == 0 => Some(0),
            (Some(_), None) | (None, Some(_)) => Some(1),
            _ => None,
        })
    }

    /// Over `{0,1,2}` with `I = {0,1}*`: `L_ε = {0,1}*`,
    /// `L_{x0} = {0,1}* ∪ {x2} − {x}` and `L_{x1} = {0,1}* ∪ {x2}`.
    pub fn thm35() -> AutomaticFamily {
        #[derive(Clone, PartialEq, Eq, Hash)]
        struct S {
            agree: bool,
            // the last pair was (c, PAD) or (c, 2) right after agreement
            special: Option<(bool, bool)>,
            binary: bool,
        }
        let start = S { agree: true, special: None, binary: true };
        family(
            all_words(&strings(&["0", "1"])),
            &strings(&["0", "1", "2"]),
            start,
            |s| match s.special {
                Some((true, _)) => true,
                Some((false, excluded)) => !excluded,
                None => s.binary,
            },
            |s, e, x| {
                let binary = s.binary && x != Some("2");
                let special = match (s.agree, e, x) {
                    (true, Some(c), None) => Some((false, c == "0")),
                    (true, Some(_), Some("2")) => Some((true, false)),
                    _ => None,
                };
                let agree = s.agree && special.is_none() && e.is_some() && e == x;
                Some(S { agree, special, binary })
            },
        )
    }

    /// `L_e = {0,1}* − {e}`, `I = {0,1}*`.
    pub fn complement_singleton() -> AutomaticFamily {
        let b = strings(&["0", "1"]);
        family(all_words(&b), &b, false, |&differ| differ, |&differ, e, x| Some(differ || e != x))
    }

    /// `L_1 = 0*` and `L_{0^n} = {0^m : m ≤ n}`.
    pub fn gold() -> AutomaticFamily {
        let iat = Alphabet::atoms(&strings(&["0", "1"])).unwrap();
        // 0: ε, 1: in 0+, 2: exactly "1"
        let index = build::explore_dfa(&iat, 0u8, |_| true, |&s, t| match (s, t) {
            (0, Symbol::Atom(a)) if a == "1" => Some(2),
            (0 | 1, Symbol::Atom(a)) if a == "0" => Some(1),
            _ => None,
        });
        #[derive(Clone, PartialEq, Eq, Hash)]
        enum G {
            Start,
            Infinite,
            Bounded { x_ended: bool },
        }
        family(index, &strings(&["0"]), G::Start, |_| true, |s, e, x| match (s, e, x) {
            (G::Start, Some("1"), _) => Some(G::Infinite),
            (G::Infinite, None, Some(_)) => Some(G::Infinite),
            (G::Start, Some("0"), x) => Some(G::Bounded { x_ended: x.is_none() }),
            (G::Bounded { x_ended }, Some("0"), x) => Some(G::Bounded { x_ended: *x_ended || x.is_none() }),
            _ => None,
        })
    }

    /// `I = {ε, 0, 1}` with `L_ε = {ε}`, `L_0 = {0}` and `L_1 = ∅`.
    pub fn dead_index() -> AutomaticFamily {
        let b = strings(&["0", "1"]);
        let iat = Alphabet::atoms(&b).unwrap();
        let index = build::explore_dfa(&iat, 0u8, |_| true, |&n, _| (n == 0).then_some(1));
        family(index, &b, 0u8, |_| true, |&n, e, x| match (n, e, x) {
            (0, Some("0"), Some("0")) => Some(1),
            _ => None,
        })
    }

    pub fn family_by_name(name: &str) -> Result<AutomaticFamily> {
        Ok(match name {
            "extensions" => extensions(),
            "intervals" => intervals(),
            "length-excl" => length_excl(),
            "thm35" => thm35(),
            "complement-singleton" => complement_singleton(),
            "gold" => gold(),
            "dead-index" => dead_index(),
            _ => return Err(Error::UnknownFixture(name.to_string())),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::symbol::{strings, word};

    fn lang(f: &AutomaticFamily, e: &str, max: usize) -> Vec<String> {
        let d = f.language_of(&word(e)).unwrap();
        words_up_to(f.word_alphabet(), max)
            .into_iter()
            .filter(|x| d.accepts_atoms(x))
            .map(|x| show(&x))
            .collect()
    }

    #[test]
    fn extension_language() {
        let f = extensions();
        let l = f.language_of(&word("01")).unwrap();
        for x in words_up_to(&strings(&["0", "1"]), 5) {
            assert_eq!(l.accepts_atoms(&x), x.starts_with(&word("01")));
        }
    }

    #[test]
    fn interval_language() {
        let f = intervals();
        let e = strings(&["a|b"]);
        assert!(f.is_index(&e));
        assert!(!f.is_index(&strings(&["b|a"])));
        let l = f.language_of(&e).unwrap();
        for x in words_up_to(&strings(&["a", "b"]), 5) {
            let s = show(&x);
            assert_eq!(l.accepts_atoms(&x), "a" <= s.as_str() && s.as_str() <= "b", "{s}");
        }
    }

    #[test]
    fn gold_languages() {
        let f = gold();
        assert_eq!(lang(&f, "1", 5), ["", "0", "00", "000", "0000", "00000"]);
        assert_eq!(lang(&f, "00", 5), ["", "0", "00"]);
        assert!(!f.is_index(&word("01")));
        assert!(f.language_of(&word("10")).is_err());
    }

    #[test]
    fn thm35_languages() {
        let f = thm35();
        assert_eq!(lang(&f, "", 2), ["", "0", "1", "00", "01", "10", "11"]);
        let l = lang(&f, "010", 3);
        assert!(l.contains(&"012".to_string()) && !l.contains(&"01".to_string()));
        let l = lang(&f, "011", 3);
        assert!(l.contains(&"012".to_string()) && l.contains(&"01".to_string()));
        assert!(!l.contains(&"02".to_string()));
    }

    #[test]
    fn index_equivalence() {
        let f = length_excl();
        assert!(!f.index_equivalent(&word("0"), &word("00")).unwrap());
        assert!(f.index_equivalent(&word("0"), &word("0")).unwrap());
        let t = thm35();
        assert!(!t.index_equivalent(&word(""), &word("01")).unwrap());
    }

    #[test]
    fn nonemptiness() {
        for n in NAMES {
            assert!(family_by_name(n).unwrap().validate_nonempty().unwrap().passed, "{n}");
        }
        let r = dead_index().validate_nonempty().unwrap();
        assert_eq!(r.dead_index.as_deref(), Some("1"));
    }

    #[test]
    fn subset_indices() {
        let f = extensions();
        let s = f.subset_index_set(&word("0")).unwrap();
        for d in words_up_to(&strings(&["0", "1"]), 4) {
            assert_eq!(s.accepts_atoms(&d), d.first().map(String::as_str) == Some("0"));
        }
        let g = gold();
        let s = g.subset_index_set(&word("1")).unwrap();
        for d in g.indices_up_to(4) {
            assert!(s.accepts_atoms(&d));
        }
    }

    #[test]
    fn gold_scan() {
        let g = gold();
        let r = g.learnability_scan(3, 5).unwrap();
        let one = r.entry("1").unwrap();
        assert_eq!(one.level, None);
        assert!(one.witness.as_ref().unwrap().chars().all(|c| c == '0'));
        assert_eq!(r.entry("00").unwrap().level, Some(2));
        assert!(!r.passed());
    }

    #[test]
    fn json_round_trip() {
        let f = intervals();
        let text = f.to_json_string();
        let g = AutomaticFamily::from_json_str(&text).unwrap();
        assert_eq!(g.to_json_string(), text);
    }

    #[test]
    fn learnable_fixtures_certify() {
        for n in ["extensions", "intervals", "length-excl", "thm35", "complement-singleton"] {
            let r = family_by_name(n).unwrap().learnability_scan(3, 5).unwrap();
            assert!(r.passed(), "{n}");
        }
    }
}
