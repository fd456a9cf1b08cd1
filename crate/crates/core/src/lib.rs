//! Automatic functions, position-faithful one-tape Turing machines, and a
//! laboratory for resource-bounded learners over automatic families.

pub mod automata;
pub mod autofn;
pub mod compile;
pub mod crossing;
pub mod error;
pub mod families;
pub mod learning;
pub mod symbol;
pub mod tm;

pub use automata::{Dfa, Nfa, StateId};
pub use autofn::{AutomaticFunction, AutomaticRelation, Functionality};
pub use error::{Error, Result};
pub use symbol::{Alphabet, Symbol, Word};
pub use tm::{RunResult, TuringMachine};
