use std::collections::{BTreeMap, HashMap};

use crate::slp::{Slp, Tok};
use crate::word::Word;
use crate::{Error, Result};

/// Compresses by recursive bisection. A word of length > 1 splits into a left
/// part whose length is the largest power of two strictly smaller than the
/// total and a right remainder; equal factors are produced once and shared.
///
/// The grammar has one rule per distinct factor that appears as a split part
/// somewhere in the recursion tree, so its size is bounded by the number of
/// distinct such factors times two.
pub fn bisection(w: &Word) -> Result<Slp> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let syms = w.symbols();
    if syms.len() == 1 {
        let mut rules = BTreeMap::new();
        rules.insert(0, vec![Tok::T(syms[0])]);
        return Ok(Slp::new(rules, 0));
    }
    let mut memo: HashMap<&[u32], u32> = HashMap::new();
    let mut rules: BTreeMap<u32, Vec<Tok>> = BTreeMap::new();
    let mut next_id = 0u32;
    let top = split(syms, &mut memo, &mut rules, &mut next_id);
    let start = match top {
        Tok::N(id) => id,
        // unreachable for len > 1, but keep the grammar valid regardless
        Tok::T(s) => {
            rules.insert(next_id, vec![Tok::T(s)]);
            next_id
        }
    };
    Ok(Slp::new(rules, start))
}

fn split<'a>(
    s: &'a [u32],
    memo: &mut HashMap<&'a [u32], u32>,
    rules: &mut BTreeMap<u32, Vec<Tok>>,
    next_id: &mut u32,
) -> Tok {
    if s.len() == 1 {
        return Tok::T(s[0]);
    }
    if let Some(&id) = memo.get(s) {
        return Tok::N(id);
    }
    // largest power of two strictly below s.len()
    let p = 1usize << (s.len() - 1).ilog2();
    let left = split(&s[..p], memo, rules, next_id);
    let right = split(&s[p..], memo, rules, next_id);
    let id = *next_id;
    *next_id += 1;
    rules.insert(id, vec![left, right]);
    memo.insert(s, id);
    Tok::N(id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Alphabet;

    fn word(s: &str) -> Word {
        Word::from_chars(s, &Alphabet::ab()).unwrap()
    }

    #[test]
    fn single_symbol() {
        let g = bisection(&word("a")).unwrap();
        assert_eq!(g.size(), 1);
        assert_eq!(g.expand(10).unwrap().symbols(), word("a").symbols());
    }

    #[test]
    fn splits_at_largest_power_of_two() {
        // length 6 splits 4 + 2, the 4 splits 2 + 2, never 3 + 3
        let g = bisection(&word("aaaaaa")).unwrap();
        assert_eq!(g.expand(100).unwrap().symbols(), word("aaaaaa").symbols());
        // aa is shared: rules are aa, aaaa = aa aa, start = aaaa aa
        assert_eq!(g.rule_count(), 3);
        assert_eq!(g.size(), 6);
    }

    #[test]
    fn paper_shape_on_fourteen_letter_word() {
        let w = word("ababbbaabbaaab");
        let g = bisection(&w).unwrap();
        assert_eq!(g.expand(100).unwrap().symbols(), w.symbols());
        // distinct factors ab, abab, bb, aa, bbaa, ababbbaa, bbaaab, start
        assert_eq!(g.rule_count(), 8);
        assert_eq!(g.size(), 16);
        let shape = g.expansion_shape().unwrap();
        let expect = crate::slp::expected_shape(
            &w,
            &[
                ("ab", vec!["a", "b"]),
                ("abab", vec!["ab", "ab"]),
                ("bb", vec!["b", "b"]),
                ("aa", vec!["a", "a"]),
                ("bbaa", vec!["bb", "aa"]),
                ("ababbbaa", vec!["abab", "bbaa"]),
                ("bbaaab", vec!["bbaa", "ab"]),
                ("ababbbaabbaaab", vec!["ababbbaa", "bbaaab"]),
            ],
            &Alphabet::ab(),
        );
        assert_eq!(shape, expect);
    }

    #[test]
    fn power_of_two_lengths_reuse_halves() {
        let w = word(&"a".repeat(1024));
        let g = bisection(&w).unwrap();
        // one rule per doubling: aa, a^4, ..., a^1024
        assert_eq!(g.rule_count(), 10);
        assert_eq!(g.expand(2000).unwrap().len(), 1024);
    }

    #[test]
    fn round_trips_on_mixed_words() {
        for s in ["ab", "aba", "abba", "babbab", "aababbabbbab"] {
            let w = word(s);
            let g = bisection(&w).unwrap();
            assert!(g.validate().is_ok());
            assert_eq!(g.expand(1 << 20).unwrap().symbols(), w.symbols());
        }
    }
}
