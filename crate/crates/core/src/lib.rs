pub mod bounds;
pub mod character;
pub mod corpus;
pub mod cyclotomic;
pub mod error;
pub mod group;
pub mod modarith;
pub mod verify;
pub mod xi;

pub use error::{Error, Result};

// Guide chapters and the README run as doc-tests.
#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/groups.md")]
mod book_groups {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/characters.md")]
mod book_characters {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/xi.md")]
mod book_xi {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/corpus.md")]
mod book_corpus {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/bounds.md")]
mod book_bounds {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
