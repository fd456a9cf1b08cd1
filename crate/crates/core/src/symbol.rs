//! Symbols, alphabets and convolution.
//!
//! Symbols are short text tokens rather than characters, so that tuple
//! symbols of a convolution and the annotated tape symbols used by compiled
//! machines are ordinary alphabet members. A tuple symbol carries `None` in
//! the positions where a track is padded.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Padding marker as shown in text output.
pub const PAD: &str = "#PAD";
/// Left-end marker of a machine tape.
pub const LEND: &str = "#LEND";
/// Blank cell of a machine tape.
pub const BLANK: &str = "#BLANK";

const RESERVED: [&str; 3] = [PAD, LEND, BLANK];

/// Separator and padding marker used when several tracks are packed into a
/// single token (`"a|_"` is the pair `(a, PAD)`).
pub const TRACK_SEP: char = '|';
pub const TRACK_PAD: &str = "_";

/// A plain string: a sequence of tokens.
pub type Word = Vec<String>;

/// Splits a string into single-character tokens.
pub fn word(s: &str) -> Word {
    s.chars().map(|c| c.to_string()).collect()
}

/// Renders a word. Single-character tokens are concatenated, anything else is
/// space separated.
pub fn show(w: &[String]) -> String {
    if w.iter().all(|t| t.chars().count() == 1) {
        w.concat()
    } else {
        w.join(" ")
    }
}

/// Parses a word given on a command line: whitespace separated tokens when
/// the text contains whitespace or any alphabet token is longer than one
/// character, single characters otherwise.
pub fn parse_word(s: &str, alphabet: &[String]) -> Word {
    let multi = alphabet.iter().any(|t| t.chars().count() != 1);
    if multi || s.contains(char::is_whitespace) {
        s.split_whitespace().map(str::to_string).collect()
    } else {
        word(s)
    }
}

/// An alphabet symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Symbol {
    Atom(String),
    Tuple(Vec<Option<String>>),
}

impl Symbol {
    pub fn atom(s: impl Into<String>) -> Self {
        Symbol::Atom(s.into())
    }

    pub fn tuple<S: AsRef<str>>(parts: &[Option<S>]) -> Self {
        Symbol::Tuple(
            parts
                .iter()
                .map(|p| p.as_ref().map(|s| s.as_ref().to_string()))
                .collect(),
        )
    }

    pub fn components(&self) -> Option<&[Option<String>]> {
        match self {
            Symbol::Tuple(c) => Some(c),
            Symbol::Atom(_) => None,
        }
    }

    pub fn is_all_pad(&self) -> bool {
        matches!(self, Symbol::Tuple(c) if c.iter().all(Option::is_none))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Atom(s) => f.write_str(s),
            Symbol::Tuple(parts) => {
                f.write_str("(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    f.write_str(p.as_deref().unwrap_or(PAD))?;
                }
                f.write_str(")")
            }
        }
    }
}

struct Inner {
    symbols: Vec<Symbol>,
    index: HashMap<Symbol, usize>,
}

/// A finite ordered set of symbols. Cheap to clone.
#[derive(Clone)]
pub struct Alphabet(Arc<Inner>);

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.symbols == other.0.symbols
    }
}

impl Eq for Alphabet {}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.symbols.iter().map(|s| s.to_string())).finish()
    }
}

fn check_token(t: &str) -> Result<()> {
    if t.is_empty() || RESERVED.contains(&t) {
        return Err(Error::ReservedToken(t.to_string()));
    }
    Ok(())
}

impl Alphabet {
    /// Builds an alphabet from arbitrary symbols, keeping their order.
    pub fn new(symbols: Vec<Symbol>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let mut index = HashMap::with_capacity(symbols.len());
        for (i, s) in symbols.iter().enumerate() {
            match s {
                Symbol::Atom(t) => check_token(t)?,
                Symbol::Tuple(parts) => {
                    for t in parts.iter().flatten() {
                        check_token(t)?;
                    }
                }
            }
            if index.insert(s.clone(), i).is_some() {
                return Err(Error::DuplicateSymbol(s.to_string()));
            }
        }
        Ok(Alphabet(Arc::new(Inner { symbols, index })))
    }

    /// Alphabet of atomic tokens.
    pub fn atoms<S: AsRef<str>>(tokens: &[S]) -> Result<Self> {
        Self::new(tokens.iter().map(|t| Symbol::atom(t.as_ref())).collect())
    }

    /// Convolution alphabet over the given tracks: every tuple over
    /// `track_i ∪ {PAD}` except the all-PAD tuple, first track most
    /// significant, each component ordered as its track then PAD.
    pub fn conv<S: AsRef<str>>(tracks: &[Vec<S>]) -> Result<Self> {
        Self::new(conv_tuples(tracks, false)?)
    }

    /// Like [`Alphabet::conv`] but with the all-PAD tuple appended last. Used
    /// where a padded word is itself a string over `Σ ∪ {PAD}`.
    pub fn conv_with_full_pad<S: AsRef<str>>(tracks: &[Vec<S>]) -> Result<Self> {
        Self::new(conv_tuples(tracks, true)?)
    }

    pub fn len(&self) -> usize {
        self.0.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0.symbols
    }

    pub fn symbol(&self, i: usize) -> &Symbol {
        &self.0.symbols[i]
    }

    pub fn index_of(&self, s: &Symbol) -> Option<usize> {
        self.0.index.get(s).copied()
    }

    pub fn index_of_atom(&self, t: &str) -> Option<usize> {
        self.index_of(&Symbol::atom(t))
    }

    /// Maps a word of symbols to indices.
    pub fn encode(&self, w: &[Symbol]) -> Result<Vec<usize>> {
        w.iter()
            .map(|s| self.index_of(s).ok_or_else(|| Error::UnknownSymbol(s.to_string())))
            .collect()
    }

    pub fn encode_atoms(&self, w: &[String]) -> Result<Vec<usize>> {
        w.iter()
            .map(|t| self.index_of_atom(t).ok_or_else(|| Error::UnknownSymbol(t.clone())))
            .collect()
    }

    pub fn decode(&self, w: &[usize]) -> Vec<Symbol> {
        w.iter().map(|&i| self.symbol(i).clone()).collect()
    }

    /// Atomic tokens of a plain alphabet.
    pub fn tokens(&self) -> Option<Vec<String>> {
        self.0
            .symbols
            .iter()
            .map(|s| match s {
                Symbol::Atom(t) => Some(t.clone()),
                Symbol::Tuple(_) => None,
            })
            .collect()
    }

    /// Arity when every symbol is a tuple of one common length.
    pub fn arity(&self) -> Option<usize> {
        let first = self.0.symbols.first()?.components()?.len();
        self.0
            .symbols
            .iter()
            .all(|s| s.components().map(|c| c.len()) == Some(first))
            .then_some(first)
    }

    /// Per-track token lists in order of first appearance.
    pub fn tracks(&self) -> Option<Vec<Vec<String>>> {
        let k = self.arity()?;
        let mut tracks: Vec<Vec<String>> = vec![Vec::new(); k];
        for s in self.symbols() {
            for (i, c) in s.components().unwrap().iter().enumerate() {
                if let Some(t) = c {
                    if !tracks[i].contains(t) {
                        tracks[i].push(t.clone());
                    }
                }
            }
        }
        Some(tracks)
    }
}

fn conv_tuples<S: AsRef<str>>(tracks: &[Vec<S>], full_pad: bool) -> Result<Vec<Symbol>> {
    if tracks.is_empty() {
        return Err(Error::InvalidTracks("arity must be at least 1".into()));
    }
    let choices: Vec<Vec<Option<String>>> = tracks
        .iter()
        .map(|t| {
            t.iter()
                .map(|s| Some(s.as_ref().to_string()))
                .chain(std::iter::once(None))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; tracks.len()];
    loop {
        let tuple: Vec<Option<String>> =
            idx.iter().zip(&choices).map(|(&i, c)| c[i].clone()).collect();
        if tuple.iter().any(Option::is_some) {
            out.push(Symbol::Tuple(tuple));
        }
        let mut pos = tracks.len();
        loop {
            if pos == 0 {
                if full_pad {
                    out.push(Symbol::Tuple(vec![None; tracks.len()]));
                }
                return Ok(out);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Convolution of `words`, one per track. Checks every symbol against its
/// track alphabet.
pub fn convolve<S: AsRef<str>>(words: &[Word], tracks: &[Vec<S>]) -> Result<Vec<Symbol>> {
    if words.len() != tracks.len() || words.is_empty() {
        return Err(Error::InvalidTracks(format!(
            "{} words for {} tracks",
            words.len(),
            tracks.len()
        )));
    }
    for (w, t) in words.iter().zip(tracks) {
        for s in w {
            if !t.iter().any(|a| a.as_ref() == s) {
                return Err(Error::UnknownSymbol(s.clone()));
            }
        }
    }
    Ok(convolve_unchecked(words))
}

/// Convolution without alphabet checks.
pub fn convolve_unchecked(words: &[Word]) -> Vec<Symbol> {
    let len = words.iter().map(Vec::len).max().unwrap_or(0);
    (0..len)
        .map(|j| Symbol::Tuple(words.iter().map(|w| w.get(j).cloned()).collect()))
        .collect()
}

/// Inverse of [`convolve`]. `arity` is needed for the empty convolution.
pub fn deconvolve(w: &[Symbol], arity: usize) -> Result<Vec<Word>> {
    let mut out: Vec<Word> = vec![Vec::new(); arity];
    let mut ended = vec![false; arity];
    for (pos, s) in w.iter().enumerate() {
        let parts = s
            .components()
            .filter(|c| c.len() == arity)
            .ok_or_else(|| Error::MalformedConvolution(format!("symbol {s} at {pos}")))?;
        if parts.iter().all(Option::is_none) {
            return Err(Error::MalformedConvolution(format!("all-PAD symbol at {pos}")));
        }
        for (i, p) in parts.iter().enumerate() {
            match p {
                Some(t) if ended[i] => {
                    return Err(Error::MalformedConvolution(format!(
                        "track {i} resumes with {t} after padding at {pos}"
                    )))
                }
                Some(t) => out[i].push(t.clone()),
                None => ended[i] = true,
            }
        }
    }
    Ok(out)
}

/// Packs several tracks into one word of joined tokens (`"a|_"`).
pub fn join_tracks(tracks: &[Word]) -> Word {
    let len = tracks.iter().map(Vec::len).max().unwrap_or(0);
    (0..len)
        .map(|j| {
            tracks
                .iter()
                .map(|w| w.get(j).map(String::as_str).unwrap_or(TRACK_PAD))
                .collect::<Vec<_>>()
                .join(&TRACK_SEP.to_string())
        })
        .collect()
}

/// Inverse of [`join_tracks`].
pub fn split_tracks(w: &[String], k: usize) -> Result<Vec<Word>> {
    let mut out: Vec<Word> = vec![Vec::new(); k];
    let mut ended = vec![false; k];
    for tok in w {
        let parts: Vec<&str> = tok.split(TRACK_SEP).collect();
        if parts.len() != k {
            return Err(Error::MalformedConvolution(format!("token {tok:?} has wrong arity")));
        }
        for (i, p) in parts.iter().enumerate() {
            if *p == TRACK_PAD {
                ended[i] = true;
            } else if ended[i] {
                return Err(Error::MalformedConvolution(format!("token {tok:?} resumes track {i}")));
            } else {
                out[i].push(p.to_string());
            }
        }
    }
    Ok(out)
}

/// All joined tokens over the given track alphabets (all-PAD excluded).
pub fn joined_tokens<S: AsRef<str>>(tracks: &[Vec<S>]) -> Result<Vec<String>> {
    Ok(conv_tuples(tracks, false)?
        .into_iter()
        .map(|s| {
            s.components()
                .unwrap()
                .iter()
                .map(|c| c.as_deref().unwrap_or(TRACK_PAD).to_string())
                .collect::<Vec<_>>()
                .join(&TRACK_SEP.to_string())
        })
        .collect())
}

/// Components of a joined token (`None` for `_`).
pub fn token_parts(tok: &str) -> Vec<Option<&str>> {
    tok.split(TRACK_SEP)
        .map(|p| (p != TRACK_PAD).then_some(p))
        .collect()
}

/// Every word over `alphabet` of length at most `max_len`, in length-lex order.
pub fn words_up_to(alphabet: &[String], max_len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * alphabet.len());
        for w in &layer {
            for a in alphabet {
                let mut v = w.clone();
                v.push(a.clone());
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub fn strings(tokens: &[&str]) -> Vec<String> {
    tokens.iter().map(|s| s.to_string()).collect()
}
