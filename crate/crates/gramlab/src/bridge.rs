//! Transport between grammars over a k-letter alphabet and grammars over
//! bits, through the homomorphism phi(c_i) = a^i b with a = 0 and b = 1.
//!
//! Encoding only swaps terminals for small digit rules, so it costs exactly
//! 2k - 1 extra size. Decoding undoes phi on the grammar itself, without
//! ever expanding a value: each nonterminal of the binary grammar is summed
//! up by what it contributes to a symbol boundary, and those summaries
//! compose along right-hand sides.

use crate::slp::{Slp, Tok};
use crate::word::Word;
use crate::{Error, Result};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// phi itself: every symbol i becomes 0^i 1.
pub fn phi_encode_word(w: &Word) -> Result<Word> {
    let mut out = Vec::with_capacity(2 * w.len());
    for &s in w.symbols() {
        out.extend(std::iter::repeat(0).take(s as usize));
        out.push(1);
    }
    Word::new(out, 2)
}

/// Inverse of phi on words, for a target alphabet of size k.
pub fn phi_decode_word(w: &Word, k: u32) -> Result<Word> {
    if k == 0 {
        return Err(Error::Param("phi needs a nonempty target alphabet".into()));
    }
    let mut out = Vec::new();
    let mut pending: u32 = 0;
    for &bit in w.symbols() {
        match bit {
            0 => {
                pending += 1;
                if pending >= k {
                    return Err(Error::NotInImage(format!(
                        "run of {pending} zeros needs a symbol past c_{}",
                        k - 1
                    )));
                }
            }
            1 => {
                out.push(pending);
                pending = 0;
            }
            other => {
                return Err(Error::NotInImage(format!("symbol {other} is not a bit")));
            }
        }
    }
    if pending > 0 {
        return Err(Error::NotInImage(format!("{pending} trailing zeros after the last one")));
    }
    Word::new(out, k)
}

/// Replace every terminal c_i by a nonterminal deriving 0^i 1. Adds one
/// rule per digit: size grows by exactly 2k - 1, the derived word by phi.
pub fn encode_slp(slp: &Slp, k: u32) -> Result<Slp> {
    if k == 0 {
        return Err(Error::Param("phi needs a nonempty target alphabet".into()));
    }
    for (_, rhs) in slp.rules() {
        for t in rhs {
            if let Tok::T(s) = *t {
                if s >= k {
                    return Err(Error::SymbolOutOfRange { id: s, alphabet_size: k });
                }
            }
        }
    }
    let base = slp.max_nt_id() + 1;
    let mut rules: BTreeMap<u32, Vec<Tok>> = slp
        .rules()
        .map(|(nt, rhs)| {
            let mapped = rhs
                .iter()
                .map(|t| match *t {
                    Tok::T(s) => Tok::N(base + s),
                    n => n,
                })
                .collect();
            (nt, mapped)
        })
        .collect();
    rules.insert(base, vec![Tok::T(1)]);
    for i in 1..k {
        rules.insert(base + i, vec![Tok::T(0), Tok::N(base + i - 1)]);
    }
    Ok(Slp::new(rules, slp.start()))
}

/// How one nonterminal of a binary grammar sits across symbol boundaries:
/// its value reads as phi(first symbol) phi(rest) 0^right, where `left` is
/// that first symbol and `middle` names the decoded rule for the rest.
/// A value with no one-bit at all is a bare zero run: both options empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PsiDecomposition {
    pub left: Option<u32>,
    pub middle: Option<u32>,
    pub right: u32,
}

/// Decoded grammar plus the per-nonterminal summaries and a flat count of
/// elementary steps taken, for checking that the pass stays linear.
#[derive(Debug, Clone)]
pub struct DecodeAnalysis {
    pub slp: Slp,
    pub psi: BTreeMap<u32, PsiDecomposition>,
    pub ops: u64,
}

enum Piece {
    Digit(u32),
    Bar,
    Sub(u32),
}

/// Undo phi on a grammar without expanding it. Fails with `NotInImage`
/// whenever the derived word could not be phi of anything over k symbols.
pub fn decode_analysis(slp: &Slp, k: u32) -> Result<DecodeAnalysis> {
    if k == 0 {
        return Err(Error::Param("phi needs a nonempty target alphabet".into()));
    }
    let order = match slp.topo_order() {
        Some(o) => o,
        None => return Err(Error::InvalidGrammar(slp.validate())),
    };

    let mut psi: BTreeMap<u32, PsiDecomposition> = BTreeMap::new();
    let mut out_rules: BTreeMap<u32, Vec<Tok>> = BTreeMap::new();
    let mut ops: u64 = 0;

    for nt in order {
        let rhs = slp.rhs(nt).expect("topo order lists defined rules");
        // Walk the rule as a stream of digit runs, boundary bars and
        // already-decoded middles, merging zero runs across the seams.
        let mut pieces: Vec<Piece> = Vec::new();
        for t in rhs {
            match *t {
                Tok::T(0) => pieces.push(Piece::Digit(1)),
                Tok::T(1) => pieces.push(Piece::Bar),
                Tok::T(s) => {
                    return Err(Error::NotInImage(format!("terminal {s} is not a bit")));
                }
                Tok::N(c) => {
                    let p = psi[&c];
                    if let Some(first) = p.left {
                        pieces.push(Piece::Digit(first));
                        pieces.push(Piece::Bar);
                    }
                    if p.middle.is_some() {
                        pieces.push(Piece::Sub(c));
                    }
                    pieces.push(Piece::Digit(p.right));
                }
            }
        }

        let mut out: Vec<Tok> = Vec::new();
        let mut pending: u32 = 0;
        for piece in pieces {
            ops += 1;
            match piece {
                Piece::Digit(d) => {
                    pending += d;
                    if pending >= k {
                        return Err(Error::NotInImage(format!(
                            "n:{nt} accumulates a run of {pending} zeros, past c_{}",
                            k - 1
                        )));
                    }
                }
                Piece::Bar => {
                    ops += 1;
                    out.push(Tok::T(pending));
                    pending = 0;
                }
                Piece::Sub(c) => {
                    if pending > 0 {
                        return Err(Error::NotInImage(format!(
                            "n:{nt} has {pending} zeros running into a decoded block"
                        )));
                    }
                    ops += 1;
                    out.push(Tok::N(c));
                }
            }
        }

        let summary = match out.first() {
            None => PsiDecomposition { left: None, middle: None, right: pending },
            Some(&first) => {
                let Tok::T(sym) = first else {
                    unreachable!("a decoded block is always preceded by a full symbol")
                };
                let middle = if out.len() > 1 {
                    out_rules.insert(nt, out[1..].to_vec());
                    Some(nt)
                } else {
                    None
                };
                PsiDecomposition { left: Some(sym), middle, right: pending }
            }
        };
        psi.insert(nt, summary);
    }

    let s = psi[&slp.start()];
    if s.right != 0 {
        return Err(Error::NotInImage(format!(
            "derived word ends in {} zeros instead of a one",
            s.right
        )));
    }
    let Some(first) = s.left else {
        return Err(Error::NotInImage("derived word is empty".into()));
    };

    // Splice the start summary back into a start rule. Only when some other
    // decoded rule refers to the start's middle does that middle stay a
    // separate rule; otherwise it is inlined.
    let start_nt = slp.start();
    let mut start_rhs = vec![Tok::T(first)];
    if s.middle.is_some() {
        let referenced = out_rules
            .iter()
            .filter(|(&id, _)| id != start_nt)
            .flat_map(|(_, rhs)| rhs)
            .any(|t| matches!(t, Tok::N(c) if *c == start_nt));
        if referenced {
            start_rhs.push(Tok::N(start_nt));
            let fresh = slp.max_nt_id() + 1;
            out_rules.insert(fresh, start_rhs);
            return Ok(DecodeAnalysis { slp: Slp::new(out_rules, fresh), psi, ops });
        }
        let middle = out_rules.remove(&start_nt).expect("middle implies a stored rule");
        start_rhs.extend(middle);
    }
    out_rules.insert(start_nt, start_rhs);
    Ok(DecodeAnalysis { slp: Slp::new(out_rules, start_nt), psi, ops })
}

/// Undo phi on a grammar; the decoded grammar is at most twice the size.
pub fn decode_slp(slp: &Slp, k: u32) -> Result<Slp> {
    Ok(decode_analysis(slp, k)?.slp)
}

/// Lift a binary-alphabet compressor to any alphabet: pack the word's
/// symbols densely, push it through phi, compress, decode, and restore the
/// original symbols. The result is at most twice the size the compressor
/// achieved on the binary image.
pub fn compressor_d<C>(w: &Word, compress: C) -> Result<Slp>
where
    C: Fn(&Word) -> Result<Slp>,
{
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let originals: Vec<u32> = w.symbols().iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let dense_of: HashMap<u32, u32> =
        originals.iter().enumerate().map(|(d, &s)| (s, d as u32)).collect();
    let k = originals.len() as u32;
    let dense = Word::new(w.symbols().iter().map(|s| dense_of[s]).collect(), k)?;
    let binary = phi_encode_word(&dense)?;
    let packed = compress(&binary)?;
    let decoded = decode_slp(&packed, k)?;
    decoded.map_terminals(|d| vec![originals[d as usize]])
}
