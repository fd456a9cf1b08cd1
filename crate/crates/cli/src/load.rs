//! Resolving `fixture:*`, `family:*` and `learner:*` names or JSON files.

use std::fs;

use autolin::automata::json::{dfa_from_str, dfa_to_string, nfa_from_str};
use autolin::autofn::{fixtures as ff, AutomaticFunction, AutomaticRelation};
use autolin::families::{fixtures as fam, AutomaticFamily};
use autolin::learning::{self, LearnerSpec};
use autolin::symbol::{parse_word, token_parts, Alphabet, Symbol, Word};
use autolin::tm::fixtures as tf;
use autolin::{Dfa, Error, Nfa, TuringMachine};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] Error),

    #[error("cannot access {0}: {1}")]
    Io(String, String),

    #[error("{0}")]
    Verdict(String),
}

impl CliError {
    /// 1 for a negative verdict surfaced as an error, 2 for bad input.
    pub fn status(&self) -> u8 {
        match self {
            CliError::Io(..) => 2,
            CliError::Verdict(_) => 1,
            CliError::Core(e) => match e {
                Error::NotFunctional(_)
                | Error::AmbiguousOutput { .. }
                | Error::OutputDisagreement { .. }
                | Error::StateCap { .. }
                | Error::NotLinearTime { .. }
                | Error::ExtractionMismatch { .. }
                | Error::EmptyLanguage
                | Error::LearnerFault(_) => 1,
                _ => 2,
            },
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read(path: &str) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.to_string(), e.to_string()))
}

fn fixture<'a>(name: &'a str, prefixes: &[&str]) -> Option<&'a str> {
    prefixes.iter().find_map(|p| name.strip_prefix(p).and_then(|n| n.strip_prefix(':')))
}

/// Every built-in name with its kind.
pub fn catalog() -> Vec<(String, &'static str)> {
    let mut out = Vec::new();
    out.extend(ff::FUNCTIONS.iter().map(|n| (format!("fixture:{n}"), "function")));
    out.extend(ff::RELATIONS.iter().map(|n| (format!("fixture:{n}"), "relation")));
    out.extend(tf::NAMES.iter().map(|n| (format!("fixture:{n}"), "machine")));
    out.extend(fam::NAMES.iter().chain(&fam::NEGATIVE).map(|n| (format!("family:{n}"), "family")));
    out.extend(learning::learner::NAMES.iter().map(|n| (format!("learner:{n}"), "learner")));
    out
}

/// JSON of a built-in: graph automata for functions, relations and
/// learners, machine JSON for machines, family JSON for families.
pub fn dump(name: &str) -> Result<String> {
    if let Some(n) = fixture(name, &["fixture"]) {
        if let Ok(g) = ff::graph(n) {
            return Ok(dfa_to_string(&g));
        }
        return Ok(tf::machine(n)?.to_json_string());
    }
    if let Some(n) = fixture(name, &["family"]) {
        return Ok(fam::family_by_name(n)?.to_json_string());
    }
    if let Some(n) = fixture(name, &["learner"]) {
        return Ok(dfa_to_string(learning::learner_by_name(n)?.update().graph()));
    }
    Err(Error::UnknownFixture(name.to_string()).into())
}

pub fn function(s: &str) -> Result<AutomaticFunction> {
    match fixture(s, &["fixture"]) {
        Some(n) => Ok(ff::function(n)?),
        None => Ok(AutomaticFunction::from_json_str(&read(s)?)?),
    }
}

pub fn relation(s: &str) -> Result<AutomaticRelation> {
    let g = match fixture(s, &["fixture"]) {
        Some(n) => ff::graph(n)?,
        None => dfa_from_str(&read(s)?)?,
    };
    Ok(AutomaticRelation::new(&g)?)
}

pub fn machine(s: &str) -> Result<TuringMachine> {
    match fixture(s, &["fixture"]) {
        Some(n) => Ok(tf::machine(n)?),
        None => Ok(TuringMachine::from_json_str(&read(s)?)?),
    }
}

pub fn family(s: &str) -> Result<AutomaticFamily> {
    match fixture(s, &["family", "fixture"]) {
        Some(n) => Ok(fam::family_by_name(n)?),
        None => Ok(AutomaticFamily::from_json_str(&read(s)?)?),
    }
}

pub fn learner(s: &str) -> Result<LearnerSpec> {
    Ok(fixture(s, &["learner"]).unwrap_or(s).parse()?)
}

pub fn dfa(s: &str) -> Result<Dfa> {
    Ok(dfa_from_str(&read(s)?)?)
}

pub fn nfa(s: &str) -> Result<Nfa> {
    Ok(nfa_from_str(&read(s)?)?)
}

/// A word over `al`: plain tokens as for inputs, or whitespace separated
/// joined tokens such as `a|_` over a convolution alphabet.
pub fn symbols(al: &Alphabet, s: &str) -> Result<Vec<Symbol>> {
    let w: Vec<Symbol> = match al.tokens() {
        Some(toks) => parse_word(s, &toks).into_iter().map(Symbol::Atom).collect(),
        None => s.split_whitespace().map(|t| Symbol::tuple(&token_parts(t))).collect(),
    };
    match w.iter().find(|x| al.index_of(x).is_none()) {
        Some(x) => Err(Error::UnknownSymbol(x.to_string()).into()),
        None => Ok(w),
    }
}

/// A command-line input word; every token must belong to `alphabet`.
pub fn input(s: &str, alphabet: &[String]) -> Result<Word> {
    let w = parse_word(s, alphabet);
    match w.iter().find(|t| !alphabet.contains(t)) {
        Some(t) => Err(Error::UnknownSymbol(t.clone()).into()),
        None => Ok(w),
    }
}
