//! Classical automata and their translations to and from recognizers.

mod convert;
mod dfa;
mod hom;
mod tree;

pub use convert::{dfa_to_recognizer, recognizer_to_dfa, recognizer_to_tree_automaton, tree_automaton_to_recognizer};
pub use dfa::{classical_derivative, Dfa, DfaEquiv};
pub use hom::Homomorphism;
pub use tree::TreeAutomaton;
