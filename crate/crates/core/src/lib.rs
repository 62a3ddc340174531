//! Exact cohomology of compact solvmanifolds from finite presentations.

pub mod character;
pub mod chars;
pub mod commands;
pub mod complex;
pub mod derham;
pub mod dolbeault;
pub mod error;
pub mod field;
pub mod input;
pub mod jordan;
pub mod lattice;
pub mod lie;
pub mod matrix;
pub mod modification;
pub mod poly;
pub mod rational;
pub mod report;
pub mod weights;

pub use error::{Error, Result};

/// The guide in `book/`, compiled here so its examples run as doctests.
pub mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/presentations.md")]
    pub mod presentations {}
    #[doc = include_str!("../../../book/src/characters.md")]
    pub mod characters {}
    #[doc = include_str!("../../../book/src/de-rham.md")]
    pub mod de_rham {}
    #[doc = include_str!("../../../book/src/dolbeault.md")]
    pub mod dolbeault {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
