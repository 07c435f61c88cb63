//! Text formats for grammars and word files.
//!
//! Grammar files are line-oriented:
//!
//! ```text
//! start n:<id>
//! map <dense-id> <original-id>     (zero or more, bridge outputs only)
//! n:<id> -> <tok> <tok> ...        (one production per line)
//! ```
//!
//! Tokens are `t:<int>` for terminals and `n:<int>` for nonterminals,
//! separated by single spaces, with a trailing newline. Productions appear in
//! topological order, referenced before referencing, canonicalized by always
//! emitting the smallest ready nonterminal id first, so output is
//! byte-stable for a given grammar.
//!
//! Word files hold one word per line: in `char` mode each character is one
//! symbol (read with the sorted-distinct-characters table, so ids are stable
//! under round-trips), in `int` mode symbols are space-separated integers.

use std::collections::BTreeMap;

use crate::slp::{Slp, Tok};
use crate::{Alphabet, Error, Result, Word};

pub fn write_grammar(slp: &Slp, remap: &[(u32, u32)]) -> Result<String> {
    let order = match slp.topo_order() {
        Some(o) => o,
        None => return Err(Error::InvalidGrammar(slp.validate())),
    };
    let mut out = String::new();
    out.push_str(&format!("start n:{}\n", slp.start()));
    for &(dense, original) in remap {
        out.push_str(&format!("map {dense} {original}\n"));
    }
    for nt in order {
        out.push_str(&format!("n:{nt} ->"));
        for tok in slp.rhs(nt).unwrap() {
            match tok {
                Tok::T(s) => out.push_str(&format!(" t:{s}")),
                Tok::N(m) => out.push_str(&format!(" n:{m}")),
            }
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn parse_grammar(text: &str) -> Result<(Slp, Vec<(u32, u32)>)> {
    let mut lines = text.lines().enumerate();
    let (_, first) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty grammar file".into() })?;
    let start = match first.strip_prefix("start ") {
        Some(rest) => parse_nt(rest, 1)?,
        None => {
            return Err(Error::Parse { line: 1, msg: "expected `start n:<id>`".into() });
        }
    };
    let mut remap: Vec<(u32, u32)> = Vec::new();
    let mut rules: BTreeMap<u32, Vec<Tok>> = BTreeMap::new();
    let mut in_header = true;
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.is_empty() {
            return Err(Error::Parse { line: lineno, msg: "blank line".into() });
        }
        if in_header {
            if let Some(rest) = line.strip_prefix("map ") {
                let mut it = rest.split_whitespace();
                let dense = parse_int(it.next(), lineno)?;
                let original = parse_int(it.next(), lineno)?;
                if it.next().is_some() {
                    return Err(Error::Parse { line: lineno, msg: "trailing tokens on map line".into() });
                }
                remap.push((dense, original));
                continue;
            }
            in_header = false;
        }
        let (lhs, rhs) = line.split_once(" -> ").ok_or(Error::Parse {
            line: lineno,
            msg: "expected `n:<id> -> <tok> ...`".into(),
        })?;
        let nt = parse_nt(lhs, lineno)?;
        if rules.contains_key(&nt) {
            return Err(Error::Parse { line: lineno, msg: format!("duplicate production for n:{nt}") });
        }
        let mut toks = Vec::new();
        for part in rhs.split(' ') {
            if let Some(id) = part.strip_prefix("t:") {
                toks.push(Tok::T(parse_int(Some(id), lineno)?));
            } else if let Some(id) = part.strip_prefix("n:") {
                toks.push(Tok::N(parse_int(Some(id), lineno)?));
            } else {
                return Err(Error::Parse { line: lineno, msg: format!("bad token {part:?}") });
            }
        }
        rules.insert(nt, toks);
    }
    if rules.is_empty() {
        return Err(Error::Parse { line: 1, msg: "grammar has no productions".into() });
    }
    Ok((Slp::new(rules, start), remap))
}

fn parse_nt(s: &str, line: usize) -> Result<u32> {
    match s.strip_prefix("n:") {
        Some(id) => parse_int(Some(id), line),
        None => Err(Error::Parse { line, msg: format!("expected n:<id>, got {s:?}") }),
    }
}

fn parse_int(s: Option<&str>, line: usize) -> Result<u32> {
    let s = s.ok_or(Error::Parse { line, msg: "missing integer".into() })?;
    s.parse().map_err(|_| Error::Parse { line, msg: format!("bad integer {s:?}") })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordFormat {
    Char,
    Int,
}

/// One word per line. Char mode reads with the file's own
/// sorted-distinct-characters alphabet and returns it; int mode infers the
/// alphabet size as one past the largest symbol.
pub fn parse_words(text: &str, format: WordFormat) -> Result<(Vec<Word>, Alphabet)> {
    let lines: Vec<&str> = text.lines().collect();
    if lines.is_empty() {
        return Err(Error::Parse { line: 1, msg: "empty word file".into() });
    }
    match format {
        WordFormat::Char => {
            let alphabet = Alphabet::from_text(text);
            let mut words = Vec::new();
            for (idx, line) in lines.iter().enumerate() {
                if line.is_empty() {
                    return Err(Error::Parse { line: idx + 1, msg: "empty word".into() });
                }
                words.push(Word::from_chars(line, &alphabet)?);
            }
            Ok((words, alphabet))
        }
        WordFormat::Int => {
            let mut words = Vec::new();
            let mut max_sym: u32 = 0;
            let mut raw: Vec<Vec<u32>> = Vec::new();
            for (idx, line) in lines.iter().enumerate() {
                let lineno = idx + 1;
                let mut symbols = Vec::new();
                for part in line.split_whitespace() {
                    let s: u32 = part
                        .parse()
                        .map_err(|_| Error::Parse { line: lineno, msg: format!("bad integer {part:?}") })?;
                    max_sym = max_sym.max(s);
                    symbols.push(s);
                }
                if symbols.is_empty() {
                    return Err(Error::Parse { line: lineno, msg: "empty word".into() });
                }
                raw.push(symbols);
            }
            for symbols in raw {
                words.push(Word::new(symbols, max_sym + 1)?);
            }
            let alphabet = Alphabet::letters(if max_sym < 26 { max_sym as usize + 1 } else { 0 })?;
            Ok((words, alphabet))
        }
    }
}

pub fn write_words(words: &[Word], format: WordFormat, alphabet: &Alphabet) -> Result<String> {
    let mut out = String::new();
    for w in words {
        match format {
            WordFormat::Char => {
                out.push_str(&w.render(alphabet)?);
            }
            WordFormat::Int => {
                let parts: Vec<String> = w.symbols().iter().map(|s| s.to_string()).collect();
                out.push_str(&parts.join(" "));
            }
        }
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::{power, trivial};

    #[test]
    fn grammar_round_trip_is_byte_stable() {
        let w = Word::from_chars("ab", &Alphabet::ab()).unwrap();
        let g = power(&trivial(&w).unwrap(), 6).unwrap();
        let text = write_grammar(&g, &[]).unwrap();
        let (parsed, remap) = parse_grammar(&text).unwrap();
        assert!(remap.is_empty());
        assert_eq!(parsed, g);
        assert_eq!(write_grammar(&parsed, &[]).unwrap(), text);
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn grammar_format_is_exact() {
        use Tok::*;
        let mut rules = BTreeMap::new();
        rules.insert(7, vec![N(2), N(2), T(0)]);
        rules.insert(2, vec![T(0), T(1)]);
        let g = Slp::new(rules, 7);
        let text = write_grammar(&g, &[]).unwrap();
        assert_eq!(text, "start n:7\nn:2 -> t:0 t:1\nn:7 -> n:2 n:2 t:0\n");
    }

    #[test]
    fn map_lines_round_trip() {
        use Tok::*;
        let mut rules = BTreeMap::new();
        rules.insert(0, vec![T(0), T(1)]);
        let g = Slp::new(rules, 0);
        let text = write_grammar(&g, &[(0, 5), (1, 9)]).unwrap();
        assert_eq!(text, "start n:0\nmap 0 5\nmap 1 9\nn:0 -> t:0 t:1\n");
        let (parsed, remap) = parse_grammar(&text).unwrap();
        assert_eq!(parsed, g);
        assert_eq!(remap, vec![(0, 5), (1, 9)]);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_grammar("").is_err());
        assert!(parse_grammar("start x\n").is_err());
        assert!(parse_grammar("start n:0\nn:0 -> q:1\n").is_err());
        assert!(parse_grammar("start n:0\nn:0 -> t:0\nn:0 -> t:1\n").is_err());
    }

    #[test]
    fn word_files_round_trip() {
        let text = "abba\nbb\n";
        let (words, alphabet) = parse_words(text, WordFormat::Char).unwrap();
        assert_eq!(words.len(), 2);
        assert_eq!(words[0].symbols(), &[0, 1, 1, 0]);
        assert_eq!(write_words(&words, WordFormat::Char, &alphabet).unwrap(), text);

        let text = "0 1 1 0\n4 4 4\n";
        let (words, _) = parse_words(text, WordFormat::Int).unwrap();
        assert_eq!(words[1].symbols(), &[4, 4, 4]);
        assert_eq!(words[0].alphabet_size(), 5);
        assert_eq!(write_words(&words, WordFormat::Int, &Alphabet::ab()).unwrap(), text);
    }

    #[test]
    fn empty_word_file_is_an_error() {
        assert!(parse_words("", WordFormat::Char).is_err());
        assert!(parse_words("ab\n\nba\n", WordFormat::Char).is_err());
    }
}
