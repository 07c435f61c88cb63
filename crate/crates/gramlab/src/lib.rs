//! A laboratory for grammar-based string compression.
//!
//! Everything here revolves around straight-line programs (SLPs): context-free
//! grammars with exactly one production per nonterminal and an acyclic
//! reference relation, so each grammar derives exactly one word. The size of
//! an SLP is the total length of its right-hand sides, and the central
//! quantity is the smallest SLP size for a given word.
//!
//! The crate provides:
//!
//! * the SLP type itself with validation, expansion and size accounting
//!   ([`slp`]), plus the classic constructions (blocks, powers, concatenation,
//!   substitution) and the distinct-factor lower bound ([`ops`]);
//! * three compressors that produce SLPs: BISECTION, LZ78 and RePair in both
//!   its maximal-string and digram variants ([`compress`]);
//! * generators for word families on which those compressors are provably
//!   bad, each paired with a small witness grammar built alongside the word
//!   ([`families`]);
//! * a run-length bridge that moves grammars between arbitrary alphabets and
//!   the binary alphabet at a bounded size cost ([`bridge`]);
//! * an exact smallest-SLP search for very short words, usable as ground
//!   truth next to the compressors ([`oracle`]).
//!
//! Text formats for grammars and word files live in [`format`]; the `gramlab`
//! command-line tool in the sibling crate exposes all of the above.

pub mod bridge;
pub mod compress;
pub mod families;
pub mod format;
pub mod ops;
pub mod oracle;
pub mod slp;
pub mod word;

pub use slp::{Slp, Tok, ValidationReport, Violation};
pub use word::{Alphabet, Word};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("word is empty")]
    EmptyWord,
    #[error("symbol id {id} out of range for alphabet of size {alphabet_size}")]
    SymbolOutOfRange { id: u32, alphabet_size: u32 },
    #[error("alphabet characters must be distinct")]
    DuplicateChar,
    #[error("no display character for symbol id {0}")]
    NoDisplayChar(u32),
    #[error("invalid grammar:\n{0}")]
    InvalidGrammar(ValidationReport),
    #[error("expansion length overflows u128")]
    LengthOverflow,
    #[error("expansion length {len} exceeds cap {cap}")]
    CapExceeded { len: u128, cap: u128 },
    #[error("terminal {0} maps to an empty image")]
    EmptyImage(u32),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Param(String),
    #[error("substitution symbol {0} occurs in the replacement's expansion")]
    SymbolInReplacement(u32),
    #[error("word is not a run-length image: {0}")]
    NotInImage(String),
    #[error("word length {len} exceeds the exact-search limit {limit}")]
    TooLong { len: usize, limit: usize },
    #[error("exact search exceeded its budget of {0} states")]
    BudgetExceeded(u64),
}

pub type Result<T> = std::result::Result<T, Error>;

// The guide's code blocks double as doc-tests so the book cannot drift from
// the library. `cargo test --doc` compiles and runs every snippet.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/slp.md")]
    pub mod slp {}
    #[doc = include_str!("../../../book/src/constructions.md")]
    pub mod constructions {}
    #[doc = include_str!("../../../book/src/compressors.md")]
    pub mod compressors {}
    #[doc = include_str!("../../../book/src/families.md")]
    pub mod families {}
    #[doc = include_str!("../../../book/src/bridge.md")]
    pub mod bridge {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    pub mod oracle {}
    #[doc = include_str!("../../../book/src/formats.md")]
    pub mod formats {}
}
