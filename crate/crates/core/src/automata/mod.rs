//! Finite automata over arbitrary alphabets.

mod dfa;
mod nfa;

pub mod build;
pub mod json;
pub mod ops;

pub use dfa::{Dfa, StateId};
pub use nfa::Nfa;
pub use ops::{
    boolean, complement, determinize, equivalent, intersect, intersect_all, is_empty, minimize,
    prefix_closure, project, right_quotient_symbol, shortest_accepted, trim, BoolOp, Equivalence,
};
