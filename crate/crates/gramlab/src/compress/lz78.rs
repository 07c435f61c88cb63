use std::collections::{BTreeMap, HashMap};

use crate::slp::{Slp, Tok};
use crate::word::Word;
use crate::{Error, Result};

/// The LZ78 parsing of a word: each factor extends a previous factor (or the
/// empty word) by one symbol, and the final factor equals some previous
/// factor, possibly the empty word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lz78Factorization {
    /// `refs[i]` describes factor `i + 1` as (index of extended factor, new
    /// symbol); factor index 0 is the empty word.
    refs: Vec<(usize, u32)>,
    /// Index of the factor the final factor repeats; 0 means it is empty.
    last_ref: usize,
    alphabet_size: u32,
}

impl Lz78Factorization {
    /// Number of factors including the final one, which may be empty.
    pub fn factor_count(&self) -> usize {
        self.refs.len() + 1
    }

    /// Number of nonempty factors.
    pub fn nonempty_factor_count(&self) -> usize {
        self.refs.len() + usize::from(self.last_ref != 0)
    }

    /// Index of the factor repeated at the end (0 for the empty word).
    pub fn last_ref(&self) -> usize {
        self.last_ref
    }

    pub fn refs(&self) -> &[(usize, u32)] {
        &self.refs
    }

    /// Materializes every factor in order, the final repeated factor last.
    /// The final entry is the empty word when the parse ends exactly at a
    /// fresh factor boundary.
    pub fn factors(&self) -> Vec<Word> {
        let mut table: Vec<Vec<u32>> = vec![Vec::new()];
        for &(prev, sym) in &self.refs {
            let mut f = table[prev].clone();
            f.push(sym);
            table.push(f);
        }
        let mut out: Vec<Word> = table[1..]
            .iter()
            .map(|f| Word::new(f.clone(), self.alphabet_size).unwrap())
            .collect();
        out.push(Word::new(table[self.last_ref].clone(), self.alphabet_size).unwrap());
        out
    }
}

/// Parses greedily: each factor is the shortest prefix of the rest that is
/// not yet in the dictionary, so it equals a known factor extended by one
/// symbol. The leftover at the end equals some known factor and is kept as an
/// explicit final factor.
pub fn lz78_factorize(w: &Word) -> Result<Lz78Factorization> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    // trie over factors; node index = factor index, node 0 = empty word
    let mut children: Vec<HashMap<u32, usize>> = vec![HashMap::new()];
    let mut refs = Vec::new();
    let mut cur = 0usize;
    for &sym in w.symbols() {
        match children[cur].get(&sym) {
            Some(&next) => cur = next,
            None => {
                let fresh = children.len();
                children[cur].insert(sym, fresh);
                children.push(HashMap::new());
                refs.push((cur, sym));
                cur = 0;
            }
        }
    }
    Ok(Lz78Factorization {
        refs,
        last_ref: cur,
        alphabet_size: w.alphabet_size(),
    })
}

/// Converts the LZ78 parsing into a grammar: one rule per dictionary factor
/// (the extended factor's nonterminal plus one terminal) and a start rule
/// listing the factors in parse order. The grammar size is less than three
/// times the factor count.
pub fn lz78(w: &Word) -> Result<Slp> {
    let fact = lz78_factorize(w)?;
    let mut rules: BTreeMap<u32, Vec<Tok>> = BTreeMap::new();
    for (i, &(prev, sym)) in fact.refs.iter().enumerate() {
        let nt = (i + 1) as u32;
        let rhs = if prev == 0 {
            vec![Tok::T(sym)]
        } else {
            vec![Tok::N(prev as u32), Tok::T(sym)]
        };
        rules.insert(nt, rhs);
    }
    let mut start_rhs: Vec<Tok> = (1..=fact.refs.len()).map(|i| Tok::N(i as u32)).collect();
    if fact.last_ref != 0 {
        start_rhs.push(Tok::N(fact.last_ref as u32));
    }
    rules.insert(0, start_rhs);
    Ok(Slp::new(rules, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Alphabet;

    fn word(s: &str) -> Word {
        Word::from_chars(s, &Alphabet::ab()).unwrap()
    }

    fn rendered_factors(s: &str) -> Vec<String> {
        let ab = Alphabet::ab();
        let w = Word::from_chars(s, &ab).unwrap();
        lz78_factorize(&w)
            .unwrap()
            .factors()
            .iter()
            .map(|f| f.render(&ab).unwrap())
            .collect()
    }

    #[test]
    fn fifteen_letter_parse() {
        assert_eq!(
            rendered_factors("aabaaababababaa"),
            ["a", "ab", "aa", "aba", "b", "abab", "aa"]
        );
    }

    #[test]
    fn unary_parse_ends_empty() {
        assert_eq!(rendered_factors("aaaaaa"), ["a", "aa", "aaa", ""]);
    }

    #[test]
    fn grammar_repeats_final_factor_nonterminal() {
        let w = word("aabaaababababaa");
        let g = lz78(&w).unwrap();
        assert_eq!(g.expand(100).unwrap().symbols(), w.symbols());
        // start rule: one token per nonempty factor, F3 appearing twice
        assert_eq!(g.rhs(0).unwrap().len(), 7);
        assert_eq!(g.rhs(0).unwrap()[6], Tok::N(3));
    }

    #[test]
    fn empty_final_factor_is_omitted_from_start_rule() {
        let w = word("aaaaaa");
        let g = lz78(&w).unwrap();
        assert_eq!(g.rhs(0).unwrap().len(), 3);
        assert_eq!(g.expand(100).unwrap().symbols(), w.symbols());
    }

    #[test]
    fn size_stays_under_three_per_factor() {
        for s in ["a", "abab", "aabbaabb", "babababababab", "aabaaababababaa"] {
            let w = word(s);
            let fact = lz78_factorize(&w).unwrap();
            let g = lz78(&w).unwrap();
            assert!(g.size() < 3 * fact.factor_count());
            assert_eq!(g.expand(1000).unwrap().symbols(), w.symbols());
        }
    }
}
