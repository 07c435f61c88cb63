use super::{finish, FamilyInstance, FamilyKind, Predicted};
use crate::ops::{max_non_overlapping, trivial};
use crate::word::{Alphabet, Word};
use crate::{Error, Result};
use std::collections::HashSet;

/// Does some length-`len` factor of `w` have at least `copies` pairwise
/// non-overlapping occurrences?
pub fn in_m(w: &Word, copies: usize, len: usize) -> bool {
    if len == 0 || len > w.len() {
        return false;
    }
    let syms = w.symbols();
    let mut seen: HashSet<&[u32]> = HashSet::new();
    for start in 0..=syms.len() - len {
        let f = &syms[start..start + len];
        if seen.insert(f) && max_non_overlapping(syms, f) >= copies {
            return true;
        }
    }
    false
}

/// A word admits a grammar smaller than itself exactly when it has a
/// length-2 factor with three disjoint copies or a length-3 factor with two.
pub fn is_compressible(w: &Word) -> bool {
    in_m(w, 3, 2) || in_m(w, 2, 3)
}

/// The longest incompressible word over k letters,
/// w_k = (prod_i a_{k-i+1}^5) prod_i ((prod_j (a_j a_i)^2) a_{i+1} a_i a_{i+1}),
/// of length n_k = 2k^2 + 2k + 1. Every factor stays below the thresholds of
/// `is_compressible`, so the trivial grammar is already optimal.
pub fn incompressible_word(k: u64, cap: u128) -> Result<FamilyInstance> {
    if k < 1 {
        return Err(Error::Param(format!("incompressible family needs k >= 1, got {k}")));
    }
    if k > 26 {
        return Err(Error::Param(format!(
            "incompressible family is rendered over letters, so k <= 26; got {k}"
        )));
    }
    let n_k = 2 * k * k + 2 * k + 1;
    if n_k as u128 > cap {
        return Err(Error::CapExceeded { len: n_k as u128, cap });
    }

    // Letter a_i is symbol i - 1.
    let mut syms: Vec<u32> = Vec::with_capacity(n_k as usize);
    for i in 1..=k {
        syms.extend(std::iter::repeat((k - i) as u32).take(5));
    }
    for i in 1..k {
        for j in i + 2..=k {
            for _ in 0..2 {
                syms.push((j - 1) as u32);
                syms.push((i - 1) as u32);
            }
        }
        syms.push(i as u32);
        syms.push((i - 1) as u32);
        syms.push(i as u32);
    }
    debug_assert_eq!(syms.len() as u64, n_k);
    let word = Word::new(syms, k as u32)?;
    let witness = trivial(&word)?;

    finish(
        FamilyKind::Incompressible,
        k,
        None,
        Alphabet::letters(k as usize)?,
        witness,
        word,
        Predicted::Incompressible { n_k },
    )
}
