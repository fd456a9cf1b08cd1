use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,

    #[error("alphabet contains duplicate symbol {0}")]
    DuplicateSymbol(String),

    #[error("token {0:?} is reserved")]
    ReservedToken(String),

    #[error("symbol {0} is not in the alphabet")]
    UnknownSymbol(String),

    #[error("alphabets differ")]
    AlphabetMismatch,

    #[error("not a convolution alphabet")]
    NotConvolution,

    #[error("malformed convolution: {0}")]
    MalformedConvolution(String),

    #[error("invalid track selection: {0}")]
    InvalidTracks(String),

    #[error("unknown state {0:?}")]
    UnknownState(String),

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("invalid machine: {0}")]
    InvalidMachine(String),

    #[error("machine is not deterministic: state {state} on {symbol} has {count} transitions")]
    Nondeterministic {
        state: String,
        symbol: String,
        count: usize,
    },

    #[error("accepting runs disagree on input {input:?}: {first:?} vs {second:?}")]
    OutputDisagreement {
        input: String,
        first: String,
        second: String,
    },

    #[error("relation is not functional: {0}")]
    NotFunctional(String),

    #[error("function evaluation produced two outputs for {input:?}: {first:?} and {second:?}")]
    AmbiguousOutput {
        input: String,
        first: String,
        second: String,
    },

    #[error("state-space cap of {cap} exceeded while building {what}")]
    StateCap { what: String, cap: usize },

    #[error("linear-time precondition failed at rate {rate}: input {input:?} ({detail})")]
    NotLinearTime {
        rate: usize,
        input: String,
        detail: String,
    },

    #[error("extraction mismatch on input {input:?}: machine gives {machine}, extracted graph gives {graph} (visit bound too small or machine not linear-time)")]
    ExtractionMismatch {
        input: String,
        machine: String,
        graph: String,
    },

    #[error("index {0:?} is not in the family's index set")]
    NotAnIndex(String),

    #[error("texts require a non-empty language")]
    EmptyLanguage,

    #[error("scripted word {0:?} is not in the language")]
    WordNotInLanguage(String),

    #[error("learner fault: {0}")]
    LearnerFault(String),

    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
