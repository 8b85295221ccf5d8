//! Finite automata over digit-tuple alphabets.
//!
//! All automata here are immutable values; every operation returns a new
//! automaton. Multi-track words are read most significant digit first with
//! shorter tracks padded by leading zeros, so the all-zeros symbol plays a
//! special role ([`pad_normalize`]).

mod alphabet;
mod dfa;
pub mod format;
mod nfa;
mod ops;

pub use alphabet::{DigitAlphabet, Symbol};
pub use dfa::{encode_digits, encode_tracks, Dfa, Word};
pub use nfa::Nfa;
pub use ops::{
    combine, counterexample, cylinder, cylinder_at, equivalent, exists, intersect_all,
    pad_normalize, project, union_all, BoolOp,
};

/// Negates every digit of every coordinate.
pub fn negate_digits(d: &Dfa) -> Result<Dfa, crate::Error> {
    d.relabel(|s| s.iter().map(|x| -x).collect())
}
