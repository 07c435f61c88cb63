//! The three compressors under study. Each takes a word and produces a valid
//! SLP deriving exactly that word:
//!
//! * [`bisection`]: recursive halving at powers of two with hash-consed
//!   factors;
//! * [`lz78`]: the LZ78 dictionary factorization turned into a grammar;
//! * [`repair`]: global replacement of the most frequent maximal string (or
//!   digram, in the classic variant), one fresh nonterminal per round.

mod bisection;
mod lz78;
mod repair;

pub use bisection::bisection;
pub use lz78::{lz78, lz78_factorize, Lz78Factorization};
pub use repair::{
    maximal_strings, repair, repair_trace_csv, RepairRound, RepairTrace, RepairVariant,
};

use crate::slp::{Slp, Tok};
use crate::word::Word;
use crate::{Alphabet, Result};

/// A compressor choice, for places that treat the three uniformly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompressorKind {
    Bisection,
    Lz78,
    Repair(RepairVariant),
}

impl CompressorKind {
    pub const ALL: [CompressorKind; 4] = [
        CompressorKind::Bisection,
        CompressorKind::Lz78,
        CompressorKind::Repair(RepairVariant::MaximalString),
        CompressorKind::Repair(RepairVariant::Digram),
    ];

    pub fn run(&self, w: &Word) -> Result<Slp> {
        match self {
            CompressorKind::Bisection => bisection(w),
            CompressorKind::Lz78 => lz78(w),
            CompressorKind::Repair(v) => Ok(repair(w, *v)?.0),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CompressorKind::Bisection => "bisection",
            CompressorKind::Lz78 => "lz78",
            CompressorKind::Repair(_) => "repair",
        }
    }

    /// The variant column for tables; empty when there is nothing to choose.
    pub fn variant_name(&self) -> &'static str {
        match self {
            CompressorKind::Repair(RepairVariant::MaximalString) => "maximal",
            CompressorKind::Repair(RepairVariant::Digram) => "digram",
            _ => "",
        }
    }
}

/// Renders a token string for traces: terminals by their display character
/// (falling back to `t<id>`), nonterminals as `X<id>`.
pub fn render_toks(toks: &[Tok], alphabet: &Alphabet) -> String {
    let mut out = String::new();
    for tok in toks {
        match tok {
            Tok::T(s) => match alphabet.char_of(*s) {
                Some(c) => out.push(c),
                None => out.push_str(&format!("t{s}")),
            },
            Tok::N(m) => out.push_str(&format!("X{m}")),
        }
    }
    out
}
