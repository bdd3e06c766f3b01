//! Regular languages of λ-terms: recognizers, Boolean formulas over them, and
//! the closure operations (products, arrows, inverse images, lifting,
//! containment, projection quantifiers).

mod accept;
mod language;
mod ops;
mod recognizer;

pub use accept::Accept;
pub use language::{Formula, Language};
pub use ops::{
    arrow_lang, contains, diagonal_non_openness_witness, lift_to_q, product_lang, pullback,
    quantify_along_projection, to_recognizer, Containment, Quantifier,
};
pub use recognizer::Recognizer;
