//! Fibonacci numeration systems, decided with finite automata.
//!
//! A numeration system is given by a *rule language*: a regular set of digit
//! strings deemed valid representations. Strings are read most significant
//! digit first and evaluated against Fibonacci place values. The crate
//! decides whether a rule yields every value exactly once
//! ([`perfection::check_perfect`]), finds representations in time linear in
//! the length of the input ([`perfection::find_representation`]), and
//! searches small automata for new such systems ([`search`]).

pub mod automata;
pub mod catalog;
mod error;
pub mod dict_order;
pub mod fib;
pub mod perfection;
pub mod regex;
pub mod search;

pub use error::Error;
