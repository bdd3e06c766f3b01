//! Higher-order regular languages of simply-typed λ-terms.

pub mod bridge;
pub mod brzozowski;
pub mod definability;
pub mod error;
pub mod formats;
pub mod kernel;
pub mod limits;
pub mod reglang;
pub mod semantics;
pub mod syntax;

pub use error::{Error, Result};
pub use limits::Limits;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/terms.md")]
    mod terms {}
    #[doc = include_str!("../../../book/src/semantics.md")]
    mod semantics {}
    #[doc = include_str!("../../../book/src/languages.md")]
    mod languages {}
    #[doc = include_str!("../../../book/src/automata.md")]
    mod automata {}
    #[doc = include_str!("../../../book/src/residuals.md")]
    mod residuals {}
    #[doc = include_str!("../../../book/src/formats.md")]
    mod formats {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
