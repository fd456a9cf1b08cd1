mod common;

use autolin::automata::build::wellformed;
use autolin::automata::{boolean, determinize, equivalent, is_empty, minimize, project, BoolOp, Dfa};
use autolin::autofn::{check_functional, fixtures as ff, length_bound, AutomaticRelation, Functionality};
use autolin::compile::compile;
use autolin::crossing::{build_a, DEFAULT_STATE_CAP};
use autolin::families::fixtures as fam;
use autolin::symbol::{convolve_unchecked, deconvolve, strings, words_up_to, Alphabet, Symbol, Word};
use autolin::tm::{default_budget, fixtures as tf, run_deterministic, run_nondet, TuringMachine};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn evaluate_agrees_with_graph_enumeration() {
    for name in ff::FUNCTIONS {
        let f = ff::function(name).unwrap();
        for x in words_up_to(f.input_alphabet(), 5) {
            let y = f.evaluate(&x).unwrap();
            let hits: Vec<Word> = words_up_to(f.output_alphabet(), x.len() + f.slack())
                .into_iter()
                .filter(|y| f.relation().contains(&[x.clone(), y.clone()]))
                .collect();
            assert_eq!(hits.len(), usize::from(y.is_some()), "{name} {x:?}");
            if let Some(y) = y {
                assert_eq!(hits[0], y);
            }
        }
    }
}

#[test]
fn slack_is_tight() {
    for name in ff::FUNCTIONS {
        let f = ff::function(name).unwrap();
        let excess = words_up_to(f.input_alphabet(), 6)
            .iter()
            .filter_map(|x| f.evaluate(x).unwrap().map(|y| y.len() as i64 - x.len() as i64))
            .max()
            .unwrap();
        assert!(excess <= f.slack() as i64, "{name}");
        if f.slack() > 0 {
            assert_eq!(excess, f.slack() as i64, "{name}");
        }
    }
}

/// Some `x` up to `len` with two images up to `len`.
fn brute_counterexample(r: &AutomaticRelation, len: usize) -> bool {
    let t = r.tracks();
    let ys = words_up_to(&t[1], len);
    words_up_to(&t[0], len)
        .iter()
        .any(|x| ys.iter().filter(|y| r.contains(&[x.clone(), (*y).clone()])).nth(1).is_some())
}

#[test]
fn functionality_on_random_relations() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let al = Alphabet::conv(&[strings(&["0", "1"]), strings(&["0", "1"])]).unwrap();
    let mut seen = [0, 0];
    for _ in 0..60 {
        let r = AutomaticRelation::new(&common::random_dfa(&mut rng, &al, 3)).unwrap();
        match check_functional(&r).unwrap() {
            Functionality::Functional => {
                assert!(!brute_counterexample(&r, 4));
                seen[0] += 1;
                assert!(length_bound(&r).is_ok());
            }
            Functionality::Counterexample { input, first, second } => {
                assert_ne!(first, second);
                assert!(r.contains(&[input.clone(), first]) && r.contains(&[input, second]));
                seen[1] += 1;
            }
        }
    }
    assert!(seen[0] > 0 && seen[1] > 0, "{seen:?}");
}

#[test]
fn runs_count_every_step() {
    let mut machines: Vec<TuringMachine> = ff::FUNCTIONS.iter().map(|n| compile(&ff::function(n).unwrap()).unwrap()).collect();
    machines.push(tf::one_sweep());
    machines.push(tf::zigzag());
    for m in &machines {
        for x in words_up_to(m.input_alphabet(), 4) {
            let r = run_deterministic(m, &x, default_budget(x.len())).unwrap();
            assert_eq!(r.steps, r.visits.iter().sum::<usize>());
            let n = run_nondet(m, &x, default_budget(x.len())).unwrap();
            assert_eq!(n.output(), r.output.as_ref());
        }
    }
}

fn padded(x: &[String], y: &[String], len: usize) -> Vec<Symbol> {
    (0..len).map(|i| Symbol::Tuple(vec![x.get(i).cloned(), y.get(i).cloned()])).collect()
}

#[test]
fn crossing_automaton_is_sound_on_samples() {
    for m in [tf::one_sweep(), compile(&ff::function("exchange").unwrap()).unwrap()] {
        let a = build_a(&m, 2, DEFAULT_STATE_CAP).unwrap();
        for x in words_up_to(m.input_alphabet(), 3) {
            let out = run_deterministic(&m, &x, default_budget(x.len())).unwrap().output;
            for y in words_up_to(m.output_alphabet(), 3) {
                let base = x.len().max(y.len());
                let hit = (base..=base + 3).any(|len| a.accepts(&padded(&x, &y, len)));
                assert_eq!(hit, out.as_ref() == Some(&y), "{x:?} {y:?}");
            }
        }
    }
}

#[test]
fn more_visits_never_shrink_a() {
    let m = compile(&ff::function("delete-first-0").unwrap()).unwrap();
    let mut prev: Option<Dfa> = None;
    for c in 1..=3 {
        let a = determinize(&build_a(&m, c, DEFAULT_STATE_CAP).unwrap());
        if let Some(p) = &prev {
            assert!(is_empty(&boolean(BoolOp::Diff, p, &a).unwrap()).is_none(), "c' = {c}");
        }
        prev = Some(a);
    }
}

#[test]
fn telltale_levels_grow_with_b() {
    for name in fam::NAMES {
        let f = fam::family_by_name(name).unwrap();
        let levels: Vec<Dfa> = (0..=4).map(|b| f.telltale_level_set(b).unwrap()).collect();
        for w in levels.windows(2) {
            assert!(is_empty(&boolean(BoolOp::Diff, &w[0], &w[1]).unwrap()).is_none(), "{name}");
        }
    }
}

#[test]
fn subset_sets_contain_equivalent_indices() {
    for name in fam::NAMES {
        let f = fam::family_by_name(name).unwrap();
        let idx = f.indices_up_to(2);
        for e in &idx {
            let sub = f.subset_index_set(e).unwrap();
            for d in idx.iter().filter(|d| f.index_equivalent(e, d).unwrap()) {
                assert!(sub.accepts_atoms(d), "{name}: {e:?} {d:?}");
            }
        }
    }
}

#[test]
fn gold_one_is_blocked_at_every_level() {
    let g = fam::gold();
    for b in 0..=6 {
        let d = g.blocking_witness(&strings(&["1"]), b).unwrap().expect("blocked");
        assert!(d.iter().all(|t| t == "0") && d.len() >= b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn minimize_and_project_respect_languages(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let al = Alphabet::conv(&[strings(&["a", "b"]), strings(&["c"])]).unwrap();
        let raw = common::random_dfa(&mut rng, &al, 4);
        let d = boolean(BoolOp::And, &raw, &wellformed(&al).unwrap()).unwrap();
        let m = minimize(&d);
        prop_assert!(equivalent(&m, &d).unwrap().equal);
        // on well-formed input, x is accepted iff some y up to |x| + 4 completes it
        let p = determinize(&project(&d, &[0]).unwrap());
        let cs = strings(&["c"]);
        for x in words_up_to(&strings(&["a", "b"]), 4) {
            let want = (0..=x.len() + 4).any(|k| {
                let y: Word = cs.iter().cycle().take(k).cloned().collect();
                d.accepts(&convolve_unchecked(&[x.clone(), y]))
            });
            let got = p.accepts(&x.iter().map(|t| Symbol::Tuple(vec![Some(t.clone())])).collect::<Vec<_>>());
            prop_assert_eq!(got, want, "{:?}", x);
        }
    }

    #[test]
    fn equivalence_counterexamples_separate(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let al = Alphabet::atoms(&strings(&["a", "b", "c"])).unwrap();
        let a = common::random_dfa(&mut rng, &al, 3);
        let b = common::random_dfa(&mut rng, &al, 3);
        let e = equivalent(&a, &b).unwrap();
        match e.counterexample {
            Some(w) => prop_assert_ne!(a.accepts(&w), b.accepts(&w)),
            None => prop_assert!(e.equal),
        }
    }

    #[test]
    fn deconvolve_inverts_convolve(x in "[01]{0,6}", y in "[01]{0,6}", z in "[01]{0,6}") {
        let ws: Vec<Word> = [x, y, z].iter().map(|s| s.chars().map(String::from).collect()).collect();
        prop_assert_eq!(deconvolve(&convolve_unchecked(&ws), 3).unwrap(), ws);
    }
}

#[test]
fn json_round_trips() {
    for name in ff::FUNCTIONS {
        let f = ff::function(name).unwrap();
        let g = f.relation().graph();
        let text = autolin::automata::json::dfa_to_string(g);
        let back = autolin::automata::json::dfa_from_str(&text).unwrap();
        assert_eq!(autolin::automata::json::dfa_to_string(&back), text, "{name}");
        let h = autolin::autofn::AutomaticFunction::from_json_str(&autolin::automata::json::render(&f.to_json())).unwrap();
        assert!(equivalent(h.relation().graph(), g).unwrap().equal, "{name}");
        assert_eq!(h.slack(), f.slack());
        let m = compile(&f).unwrap();
        let text = m.to_json_string();
        assert_eq!(TuringMachine::from_json_str(&text).unwrap().to_json_string(), text);
    }
    for name in fam::NAMES {
        let f = fam::family_by_name(name).unwrap();
        let text = f.to_json_string();
        let back = autolin::families::AutomaticFamily::from_json_str(&text).unwrap();
        assert_eq!(back.to_json_string(), text, "{name}");
    }
}

#[test]
fn append_suffix_round_trips_at_a_looser_rate() {
    let f = ff::function("append-suffix").unwrap();
    let m = compile(&f).unwrap();
    assert!(autolin::crossing::extract_automatic(&m, 4, 2, 5, DEFAULT_STATE_CAP).is_err());
    let (g, r) = autolin::crossing::extract_automatic(&m, 7, 2, 5, DEFAULT_STATE_CAP).unwrap();
    assert!(equivalent(g.graph(), f.graph()).unwrap().equal);
    assert_eq!(r.slack, 2);
}
