//! The simply-typed λ-calculus over one base type `o`, with unit and binary
//! products: syntax, typing, βη-long normalization and the Church encodings
//! of words, numerals and ranked trees.

mod church;
mod normalize;
mod term;
mod typecheck;
mod types;

pub use church::{
    builtin_term, church_numeral, church_tree, church_word, concat, counter, diagonal, evaluation,
    graft, homomorphism_term, identity, successor, uncurry, Alphabet, Builtin,
    RankedAlphabet, RankedTree,
};
pub use normalize::{normalize, normalize_with, term_eq};
pub use term::{Context, Name, Term};
pub use typecheck::{typecheck, typecheck_closed};
pub use types::SimpleType;
