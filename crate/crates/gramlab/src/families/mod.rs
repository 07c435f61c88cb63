//! Word families on which the compressors provably do badly, each packaged
//! with a small witness grammar so compressor output can be measured against
//! something near the optimum, plus the incompressible words that pin down
//! where compression becomes possible at all.

mod bisection;
mod incompressible;
mod lz78;
mod repair;

pub use bisection::{bin_pad, bisection_hard, bisection_hard_binary};
pub use incompressible::{in_m, incompressible_word, is_compressible};
pub use lz78::lz78_hard;
pub use repair::{de_bruijn, repair_hard, DeBruijn};

use crate::slp::Slp;
use crate::word::{Alphabet, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Bisection,
    BisectionBinary,
    Lz78,
    Repair,
    Incompressible,
}

impl FamilyKind {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::Bisection => "bisection",
            FamilyKind::BisectionBinary => "bisection-binary",
            FamilyKind::Lz78 => "lz78",
            FamilyKind::Repair => "repair",
            FamilyKind::Incompressible => "incompressible",
        }
    }
}

impl std::fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for FamilyKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bisection" => Ok(FamilyKind::Bisection),
            "bisection-binary" => Ok(FamilyKind::BisectionBinary),
            "lz78" => Ok(FamilyKind::Lz78),
            "repair" => Ok(FamilyKind::Repair),
            "incompressible" => Ok(FamilyKind::Incompressible),
            other => Err(crate::Error::Param(format!("unknown family {other:?}"))),
        }
    }
}

/// Family-specific closed-form predictions, checked against actual runs in
/// the test suites.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Predicted {
    /// The block length m_k and the factor set the compressor is forced to
    /// build, of cardinality (m_k + 1) · k.
    Bisection { m_k: u64, factor_set: Vec<Word> },
    /// Number of nonempty LZ78 factors: k + 2m + k(2m+2) + k²m. The count is
    /// exact for even m; for odd m it is carried as advisory only.
    Lz78 { factor_count: u64, asserted: bool },
    /// Values of the a-run exponents; the i-th lies in [2^{k+i-1}, 2^{k+i}),
    /// and all share the same (k+1)-bit binary prefix.
    Repair { exponents: Vec<u128> },
    /// The boundary length n_k = 2k² + 2k + 1; the word itself has length
    /// n_k and no length-ℓ factor repeating often enough to compress.
    Incompressible { n_k: u64 },
}

/// A family word together with its hand-built small grammar. Constructors
/// guarantee `witness` expands to `word`.
#[derive(Debug, Clone)]
pub struct FamilyInstance {
    pub family: FamilyKind,
    pub k: u64,
    pub m: Option<u64>,
    pub word: Word,
    pub alphabet: Alphabet,
    pub witness: Slp,
    pub predicted: Predicted,
}

impl FamilyInstance {
    /// Key/value rows describing the instance, one `stat,value` line each.
    pub fn stats_csv(&self) -> String {
        let mut out = String::from("stat,value\n");
        let mut push = |k: &str, v: String| out.push_str(&format!("{k},{v}\n"));
        push("family", self.family.name().to_string());
        push("k", self.k.to_string());
        if let Some(m) = self.m {
            push("m", m.to_string());
        }
        push("n", self.word.len().to_string());
        push("witness_size", self.witness.size().to_string());
        match &self.predicted {
            Predicted::Bisection { m_k, factor_set } => {
                push("m_k", m_k.to_string());
                push("forced_factors", factor_set.len().to_string());
            }
            Predicted::Lz78 { factor_count, asserted } => {
                push("predicted_factors", factor_count.to_string());
                push("prediction_asserted", asserted.to_string());
            }
            Predicted::Repair { exponents } => {
                push("blocks", exponents.len().to_string());
                push("last_exponent", exponents.last().unwrap().to_string());
            }
            Predicted::Incompressible { n_k } => push("n_k", n_k.to_string()),
        }
        out
    }
}

// Shared by the constructors: witness first (it is small), length check
// against the cap before materializing anything word-sized, then the word
// built independently of the witness and compared against its expansion.
fn finish(
    family: FamilyKind,
    k: u64,
    m: Option<u64>,
    alphabet: Alphabet,
    witness: Slp,
    word: Word,
    predicted: Predicted,
) -> crate::Result<FamilyInstance> {
    let expanded = witness.expand(word.len() as u128)?;
    if expanded.symbols() != word.symbols() {
        return Err(crate::Error::Param(format!(
            "witness for {} k={k} does not expand to the family word",
            family.name()
        )));
    }
    Ok(FamilyInstance { family, k, m, word, alphabet, witness, predicted })
}
