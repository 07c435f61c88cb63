//! Ground truth for tiny words: the exact smallest grammar size, found by
//! searching over dictionaries of repeated factors, plus two-sided bounds
//! for words beyond the exact range.
//!
//! The search rests on a normal form. In a smallest grammar every non-start
//! rule is used at least twice (a once-used rule inlines away with a net
//! saving), and two uses of the same rule in the derivation tree cover
//! disjoint intervals, so every rule's value is a factor of length 2..=n/2
//! with two non-overlapping occurrences. Given the set of rule values, the
//! cheapest grammar is a shortest tokenization of each value by strictly
//! shorter values, plus one of the whole word; minimizing over all subsets
//! of candidate values is therefore exact.

use crate::compress::CompressorKind;
use crate::families::is_compressible;
use crate::ops::{distinct_factor_lower_bound, max_non_overlapping, trivial};
use crate::slp::{Slp, Tok};
use crate::word::Word;
use crate::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};

/// Longest word the exact search accepts. Beyond this the candidate sets
/// grow enough that the subset walk stops being a desk-scale tool.
pub const MAX_EXACT_LEN: usize = 13;

/// Subset walk allowance used when the caller does not pick one.
pub const DEFAULT_BUDGET: u64 = 1 << 26;

fn parse_cost(target: &[u32], avail: &[&[u32]]) -> usize {
    let n = target.len();
    let mut dp = vec![usize::MAX; n + 1];
    dp[0] = 0;
    for i in 1..=n {
        let mut best = dp[i - 1] + 1;
        for m in avail {
            if m.len() <= i && &target[i - m.len()..i] == *m {
                best = best.min(dp[i - m.len()] + 1);
            }
        }
        dp[i] = best;
    }
    dp[n]
}

/// Same dynamic program, traced back into tokens. `avail` pairs each usable
/// value with the nonterminal that will derive it; ties go to the plain
/// terminal first and then to earlier entries, so rebuilds are stable.
fn parse_tokens(target: &[u32], avail: &[(u32, &[u32])]) -> Vec<Tok> {
    let n = target.len();
    let mut dp = vec![usize::MAX; n + 1];
    dp[0] = 0;
    for i in 1..=n {
        let mut best = dp[i - 1] + 1;
        for (_, m) in avail {
            if m.len() <= i && &target[i - m.len()..i] == *m {
                best = best.min(dp[i - m.len()] + 1);
            }
        }
        dp[i] = best;
    }
    let mut toks = Vec::with_capacity(dp[n]);
    let mut i = n;
    while i > 0 {
        if dp[i] == dp[i - 1] + 1 {
            toks.push(Tok::T(target[i - 1]));
            i -= 1;
            continue;
        }
        let (nt, m) = avail
            .iter()
            .find(|(_, m)| m.len() <= i && &target[i - m.len()..i] == *m && dp[i - m.len()] + 1 == dp[i])
            .expect("dp value is achieved by some token");
        toks.push(Tok::N(*nt));
        i -= m.len();
    }
    toks.reverse();
    toks
}

/// The exact smallest grammar for a short word, together with the number of
/// candidate dictionaries the search visited. Deterministic: the first
/// dictionary (in subset order) reaching the minimum is rebuilt.
pub fn smallest_slp(w: &Word, budget: u64) -> Result<(Slp, u64)> {
    let n = w.len();
    if n == 0 {
        return Err(Error::EmptyWord);
    }
    if n > MAX_EXACT_LEN {
        return Err(Error::TooLong { len: n, limit: MAX_EXACT_LEN });
    }
    let syms = w.symbols();

    // Candidate rule values, shortest first and lexicographic within a
    // length, so subset rank is a stable tie-break.
    let mut candidates: Vec<Vec<u32>> = {
        let mut set: BTreeSet<Vec<u32>> = BTreeSet::new();
        for len in 2..=n / 2 {
            for start in 0..=n - len {
                let f = &syms[start..start + len];
                if !set.contains(f) && max_non_overlapping(syms, f) >= 2 {
                    set.insert(f.to_vec());
                }
            }
        }
        set.into_iter().collect()
    };
    candidates.sort_by_key(|c| (c.len(), c.clone()));
    let c = candidates.len();
    assert!(c < 63, "candidate count {c} cannot happen within the length cap");

    let mut best_cost = n;
    let mut best_mask: u64 = 0;
    let mut examined: u64 = 0;
    for mask in 0u64..(1 << c) {
        examined += 1;
        if examined > budget {
            return Err(Error::BudgetExceeded(budget));
        }
        // Every chosen rule costs at least two tokens, as does the start
        // rule, so fat dictionaries cannot win.
        let floor = 2 * mask.count_ones() as usize + 2;
        if mask != 0 && floor >= best_cost {
            continue;
        }
        let members: Vec<&[u32]> = (0..c)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| candidates[i].as_slice())
            .collect();
        let mut cost = 0;
        for (j, v) in members.iter().enumerate() {
            let shorter: Vec<&[u32]> =
                members[..j].iter().copied().filter(|m| m.len() < v.len()).collect();
            cost += parse_cost(v, &shorter);
            if cost >= best_cost {
                break;
            }
        }
        if cost >= best_cost {
            continue;
        }
        cost += parse_cost(syms, &members);
        if cost < best_cost {
            best_cost = cost;
            best_mask = mask;
        }
    }

    // Rebuild the winning grammar: nonterminal 0 is the start, member j of
    // the dictionary becomes nonterminal j + 1.
    let members: Vec<&[u32]> = (0..c)
        .filter(|i| best_mask >> i & 1 == 1)
        .map(|i| candidates[i].as_slice())
        .collect();
    let mut rules: BTreeMap<u32, Vec<Tok>> = BTreeMap::new();
    for (j, v) in members.iter().enumerate() {
        let shorter: Vec<(u32, &[u32])> = members[..j]
            .iter()
            .enumerate()
            .filter(|(_, m)| m.len() < v.len())
            .map(|(i, m)| (i as u32 + 1, *m))
            .collect();
        rules.insert(j as u32 + 1, parse_tokens(v, &shorter));
    }
    let avail: Vec<(u32, &[u32])> =
        members.iter().enumerate().map(|(i, m)| (i as u32 + 1, *m)).collect();
    rules.insert(0, parse_tokens(syms, &avail));
    let slp = Slp::new(rules, 0);
    debug_assert_eq!(slp.size(), best_cost);
    debug_assert_eq!(slp.expand(n as u128).unwrap().symbols(), syms);
    Ok((slp, examined))
}

/// Two-sided bounds on the smallest grammar size, with the witness that
/// realizes the upper bound, and the exact size when the word is short
/// enough for [`smallest_slp`] within the given budget.
#[derive(Debug, Clone)]
pub struct GBounds {
    pub lower: usize,
    pub upper: usize,
    pub upper_witness: Slp,
    pub exact: Option<usize>,
}

/// Bound the smallest grammar size from both sides: counting arguments
/// below, the given compressors (plus the trivial grammar and an optional
/// externally supplied witness) above.
pub fn g_bounds(
    w: &Word,
    compressors: &[CompressorKind],
    extra_witness: Option<&Slp>,
    exact_budget: Option<u64>,
) -> Result<GBounds> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let distinct = w.symbols().iter().collect::<BTreeSet<_>>().len();
    let lower = distinct_factor_lower_bound(w, 8).max(distinct);

    let mut upper_witness = trivial(w)?;
    let mut upper = upper_witness.size();
    for kind in compressors {
        let g = kind.run(w)?;
        if g.size() < upper {
            upper = g.size();
            upper_witness = g;
        }
    }
    if let Some(g) = extra_witness {
        let derived = g.expand(w.len() as u128)?;
        if derived.symbols() != w.symbols() {
            return Err(Error::Param("supplied witness derives a different word".into()));
        }
        if g.size() < upper {
            upper = g.size();
            upper_witness = g.clone();
        }
    }

    let exact = if w.len() <= MAX_EXACT_LEN {
        match smallest_slp(w, exact_budget.unwrap_or(DEFAULT_BUDGET)) {
            Ok((g, _)) => Some(g.size()),
            Err(Error::BudgetExceeded(_)) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    if let Some(g) = exact {
        debug_assert!(lower <= g && g <= upper);
    }
    Ok(GBounds { lower, upper, upper_witness, exact })
}

/// One row of the incompressibility census: how many words of length `n`
/// (over the fixed alphabet) no grammar can shorten.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusRow {
    pub n: usize,
    pub incompressible: u64,
}

#[derive(Debug, Clone)]
pub struct CensusReport {
    pub k: u64,
    pub n_k: u64,
    pub rows: Vec<CensusRow>,
    /// Incompressible words exist at length n_k = 2k^2 + 2k + 1 and at no
    /// greater surveyed length.
    pub boundary_ok: bool,
}

/// Enumerate every word over a k-letter alphabet up to length `n_max` and
/// count the incompressible ones per length. Exhaustive, so k is capped at
/// 2 and the length at 14.
pub fn incompressibility_census(k: u64, n_max: usize) -> Result<CensusReport> {
    if !(1..=2).contains(&k) {
        return Err(Error::Param(format!("census is exhaustive, k must be 1 or 2; got {k}")));
    }
    if n_max > 14 {
        return Err(Error::Param(format!("census is exhaustive, n_max tops out at 14; got {n_max}")));
    }
    let n_k = 2 * k * k + 2 * k + 1;
    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut count = 0u64;
        let mut digits = vec![0u32; n];
        loop {
            let w = Word::new(digits.clone(), k as u32)?;
            if !is_compressible(&w) {
                count += 1;
            }
            let mut pos = n;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < k as u32 {
                    break;
                }
                digits[pos] = 0;
            }
            if digits.iter().all(|&d| d == 0) {
                break;
            }
        }
        rows.push(CensusRow { n, incompressible: count });
    }
    let at_boundary = rows
        .iter()
        .find(|r| r.n as u64 == n_k)
        .map(|r| r.incompressible > 0);
    let beyond = rows
        .iter()
        .filter(|r| r.n as u64 > n_k)
        .all(|r| r.incompressible == 0);
    let boundary_ok = at_boundary == Some(true) && beyond;
    Ok(CensusReport { k, n_k, rows, boundary_ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Alphabet;

    fn w(text: &str) -> Word {
        let ab = Alphabet::from_text(text);
        Word::from_chars(text, &ab).unwrap()
    }

    #[test]
    fn runs_of_one_letter() {
        assert_eq!(smallest_slp(&w("aaaaa"), 1 << 20).unwrap().0.size(), 5);
        let (g, _) = smallest_slp(&w("aaaaaa"), 1 << 20).unwrap();
        assert_eq!(g.size(), 5);
        assert_eq!(g.rhs(0).unwrap(), &[Tok::N(1), Tok::N(1), Tok::N(1)]);
        assert_eq!(g.rhs(1).unwrap(), &[Tok::T(0), Tok::T(0)]);
    }

    #[test]
    fn tiny_words_cost_their_length() {
        assert_eq!(smallest_slp(&w("ab"), 1 << 20).unwrap().0.size(), 2);
        assert_eq!(smallest_slp(&w("abcba"), 1 << 20).unwrap().0.size(), 5);
    }

    #[test]
    fn repeated_block_words() {
        assert_eq!(smallest_slp(&w("abab"), 1 << 20).unwrap().0.size(), 4);
        assert_eq!(smallest_slp(&w("abcabc"), 1 << 20).unwrap().0.size(), 5);
        assert_eq!(smallest_slp(&w("aaaa"), 1 << 20).unwrap().0.size(), 4);
    }

    #[test]
    fn rebuilt_witness_is_stable() {
        for text in ["aabbaabb", "abaababaabaab", "aaaaaaaaaaaaa"] {
            let (g1, _) = smallest_slp(&w(text), 1 << 26).unwrap();
            let (g2, _) = smallest_slp(&w(text), 1 << 26).unwrap();
            assert_eq!(g1, g2);
            assert_eq!(g1.expand(1 << 10).unwrap().symbols(), w(text).symbols());
        }
    }

    #[test]
    fn budget_cuts_the_walk_short() {
        match smallest_slp(&w("aaaaaaaaaaaaa"), 10) {
            Err(Error::BudgetExceeded(10)) => {}
            other => panic!("expected budget refusal, got {other:?}"),
        }
    }

    #[test]
    fn length_cap_is_enforced() {
        assert!(matches!(
            smallest_slp(&w("aaaaaaaaaaaaaa"), 1 << 20),
            Err(Error::TooLong { len: 14, limit: MAX_EXACT_LEN })
        ));
    }

    #[test]
    fn exactness_agrees_with_the_compressibility_predicate() {
        // Over two letters, a word shortens below its length exactly when
        // the factor thresholds say so.
        for n in 1..=6usize {
            for bits in 0..(1u32 << n) {
                let syms: Vec<u32> = (0..n).map(|i| bits >> i & 1).collect();
                let word = Word::new(syms, 2).unwrap();
                let (g, _) = smallest_slp(&word, 1 << 26).unwrap();
                assert_eq!(
                    g.size() < n,
                    is_compressible(&word),
                    "disagreement at {:?}",
                    word.symbols()
                );
            }
        }
    }

    #[test]
    fn bounds_bracket_the_exact_size() {
        let word = w("abcabc");
        let b = g_bounds(&word, &CompressorKind::ALL, None, None).unwrap();
        assert_eq!(b.exact, Some(5));
        assert!(b.lower <= 5);
        assert_eq!(b.upper, 5);
        assert_eq!(b.upper_witness.size(), 5);
    }

    #[test]
    fn supplied_witnesses_tighten_the_upper_bound() {
        let word = w("aaaaaaaaaaaaaaaaaaaaaaaaaaa");
        let hand = {
            let mut rules = BTreeMap::new();
            rules.insert(1, vec![Tok::T(0), Tok::T(0)]);
            rules.insert(2, vec![Tok::N(1), Tok::N(1)]);
            rules.insert(3, vec![Tok::N(2), Tok::N(2)]);
            rules.insert(4, vec![Tok::N(3), Tok::N(3)]);
            rules.insert(0, vec![Tok::N(4), Tok::N(3), Tok::N(1), Tok::T(0)]);
            Slp::new(rules, 0)
        };
        let with = g_bounds(&word, &[], Some(&hand), None).unwrap();
        assert_eq!(with.upper, hand.size());
        assert_eq!(with.exact, None);

        let wrong = trivial(&w("ab")).unwrap();
        assert!(matches!(
            g_bounds(&word, &[], Some(&wrong), None),
            Err(Error::Param(_))
        ));
    }

    #[test]
    fn census_finds_the_two_letter_boundary() {
        let report = incompressibility_census(1, 7).unwrap();
        assert_eq!(report.n_k, 5);
        assert!(report.boundary_ok);
        let by_n: Vec<u64> = report.rows.iter().map(|r| r.incompressible).collect();
        assert_eq!(by_n, vec![1, 1, 1, 1, 1, 0, 0]);
    }
}
