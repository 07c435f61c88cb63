//! Words over dense integer alphabets, and the display tables that map
//! symbol ids to characters in the text formats.

use crate::{Error, Result};

/// Display table: symbol id `i` renders as `chars[i]`.
///
/// Words themselves carry only dense integer symbols; an alphabet is the
/// sidecar needed to read or write them as text. The default binary table is
/// `a` = 0, `b` = 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    chars: Vec<char>,
}

impl Alphabet {
    pub fn new(chars: Vec<char>) -> Result<Self> {
        for (i, c) in chars.iter().enumerate() {
            if chars[..i].contains(c) {
                return Err(Error::DuplicateChar);
            }
        }
        Ok(Alphabet { chars })
    }

    /// `a` = 0, `b` = 1.
    pub fn ab() -> Self {
        Alphabet { chars: vec!['a', 'b'] }
    }

    /// `0` = 0, `1` = 1.
    pub fn bits() -> Self {
        Alphabet { chars: vec!['0', '1'] }
    }

    /// `0` = 0, `1` = 1, `a` = 2: binary digits plus a filler letter.
    pub fn bits_a() -> Self {
        Alphabet { chars: vec!['0', '1', 'a'] }
    }

    /// `a` = 0, `b` = 1, ..., up to `k` letters (max 26).
    pub fn letters(k: usize) -> Result<Self> {
        if k > 26 {
            return Err(Error::Param(format!("no display letters for {k} symbols (max 26)")));
        }
        Ok(Alphabet { chars: (0..k).map(|i| (b'a' + i as u8) as char).collect() })
    }

    /// Sorted distinct characters of `text`, newlines excluded. This is the
    /// table a character-mode word file is read with, so ids stay stable
    /// under round-trips.
    pub fn from_text(text: &str) -> Self {
        let mut chars: Vec<char> = text.chars().filter(|c| *c != '\n' && *c != '\r').collect();
        chars.sort_unstable();
        chars.dedup();
        Alphabet { chars }
    }

    pub fn id_of(&self, c: char) -> Option<u32> {
        self.chars.iter().position(|x| *x == c).map(|i| i as u32)
    }

    pub fn char_of(&self, id: u32) -> Option<char> {
        self.chars.get(id as usize).copied()
    }

    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }
}

/// A finite sequence of symbols drawn from `{0, ..., alphabet_size - 1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    symbols: Vec<u32>,
    alphabet_size: u32,
}

impl Word {
    /// Every symbol must be below `alphabet_size`.
    pub fn new(symbols: Vec<u32>, alphabet_size: u32) -> Result<Self> {
        for &s in &symbols {
            if s >= alphabet_size {
                return Err(Error::SymbolOutOfRange { id: s, alphabet_size });
            }
        }
        Ok(Word { symbols, alphabet_size })
    }

    pub fn from_chars(text: &str, alphabet: &Alphabet) -> Result<Self> {
        let mut symbols = Vec::with_capacity(text.len());
        for c in text.chars() {
            match alphabet.id_of(c) {
                Some(id) => symbols.push(id),
                None => {
                    return Err(Error::Param(format!("character {c:?} not in the alphabet")));
                }
            }
        }
        Ok(Word { symbols, alphabet_size: alphabet.len() as u32 })
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    pub fn render(&self, alphabet: &Alphabet) -> Result<String> {
        let mut out = String::with_capacity(self.symbols.len());
        for &s in &self.symbols {
            out.push(alphabet.char_of(s).ok_or(Error::NoDisplayChar(s))?);
        }
        Ok(out)
    }

    /// Symbol-wise homomorphic image: each symbol is replaced by its image
    /// sequence. Images may not be empty.
    pub fn map_symbols(&self, new_alphabet_size: u32, f: impl Fn(u32) -> Vec<u32>) -> Result<Word> {
        let mut symbols = Vec::with_capacity(self.symbols.len());
        for &s in &self.symbols {
            let image = f(s);
            if image.is_empty() {
                return Err(Error::EmptyImage(s));
            }
            symbols.extend(image);
        }
        Word::new(symbols, new_alphabet_size)
    }
}

impl std::fmt::Debug for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Word(σ={}, ", self.alphabet_size)?;
        if self.alphabet_size <= 26 {
            for &s in &self.symbols {
                write!(f, "{}", (b'a' + s as u8) as char)?;
            }
        } else {
            write!(f, "{:?}", self.symbols)?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn out_of_range_symbol_rejected() {
        assert!(Word::new(vec![0, 2], 2).is_err());
        assert!(Word::new(vec![0, 1], 2).is_ok());
    }

    #[test]
    fn from_text_sorts_and_dedups() {
        let a = Alphabet::from_text("baab\ncc");
        assert_eq!(a.char_of(0), Some('a'));
        assert_eq!(a.char_of(1), Some('b'));
        assert_eq!(a.char_of(2), Some('c'));
        assert_eq!(a.len(), 3);
    }

    #[test]
    fn render_round_trip() {
        let ab = Alphabet::ab();
        let w = Word::from_chars("abba", &ab).unwrap();
        assert_eq!(w.symbols(), &[0, 1, 1, 0]);
        assert_eq!(w.render(&ab).unwrap(), "abba");
    }

    #[test]
    fn map_symbols_expands() {
        let w = Word::new(vec![0, 1], 2).unwrap();
        let img = w.map_symbols(2, |s| vec![s, s]).unwrap();
        assert_eq!(img.symbols(), &[0, 0, 1, 1]);
    }
}
