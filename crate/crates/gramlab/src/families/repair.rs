use super::{finish, FamilyInstance, FamilyKind, Predicted};
use crate::ops::{power, trivial};
use crate::slp::{Slp, Tok};
use crate::word::{Alphabet, Word};
use crate::{Error, Result};
use std::collections::BTreeMap;

/// A binary De Bruijn sequence of a given order, written linearly: every
/// cyclic window of `order` bits occurs exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeBruijn {
    pub order: u32,
    pub bits: Word,
}

/// Greedy construction: start from 1^order and repeatedly append the
/// smallest bit that keeps the trailing window fresh. The walk exhausts all
/// 2^order windows, and dropping the wrapped-around tail leaves one period.
pub fn de_bruijn(order: u32) -> Result<DeBruijn> {
    if order == 0 {
        return Err(Error::Param("de Bruijn order must be at least 1".into()));
    }
    if order > 24 {
        return Err(Error::Param(format!("de Bruijn order {order} is far beyond desk scale")));
    }
    let period = 1usize << order;
    let mask = (period - 1) as u32;
    let mut seen = vec![false; period];
    let mut s: Vec<u32> = vec![1; order as usize];
    let mut window = mask;
    seen[mask as usize] = true;
    'grow: loop {
        for bit in [0u32, 1] {
            let cand = ((window << 1) | bit) & mask;
            if !seen[cand as usize] {
                seen[cand as usize] = true;
                s.push(bit);
                window = cand;
                continue 'grow;
            }
        }
        break;
    }
    debug_assert_eq!(s.len(), period + order as usize - 1);
    Ok(DeBruijn { order, bits: Word::new(s[..period].to_vec(), 2)? })
}

/// The RePair-adversarial word s_k = a^{e_1} b a^{e_2} b … b a^{e_k}.
///
/// The exponents come from reading ever longer prefixes of
/// w_k = h(first k bits of B_{⌈lg k⌉}) as binary numbers, where h maps
/// 0 ↦ 01 and 1 ↦ 10. Consecutive exponents then satisfy
/// e_{i+1} = 2 e_i + bit, so a small witness reaches each block by one
/// doubling step, while the De Bruijn spine keeps long factors from
/// repeating across blocks. Lengths grow like 4^k; the cap refuses an
/// instance before anything of that size is materialized.
pub fn repair_hard(k: u64, cap: u128) -> Result<FamilyInstance> {
    if k < 2 {
        return Err(Error::Param(format!("repair family needs k >= 2, got {k}")));
    }
    if k > 48 {
        return Err(Error::Param(format!("repair family k = {k} is far beyond desk scale")));
    }
    let lg = k.next_power_of_two().trailing_zeros();
    let spine = de_bruijn(lg)?;
    let mut wk: Vec<u32> = Vec::with_capacity(2 * k as usize);
    for i in 0..k as usize {
        match spine.bits.symbols()[i] {
            0 => wk.extend([0, 1]),
            _ => wk.extend([1, 0]),
        }
    }

    let mut exponents: Vec<u128> = Vec::with_capacity(k as usize);
    let mut val: u128 = wk[..k as usize].iter().fold(0, |acc, &b| acc * 2 + b as u128);
    for i in 0..k as usize {
        val = val * 2 + wk[k as usize + i] as u128;
        exponents.push(val);
    }
    let total: u128 = exponents.iter().sum::<u128>() + (k as u128 - 1);
    if total > cap {
        return Err(Error::CapExceeded { len: total, cap });
    }

    // Witness: a power grammar for a^{e_1}, then one doubling rule per
    // block, with the separator b only in the start rule.
    let a = trivial(&Word::new(vec![0], 2)?)?;
    let base = power(&a, exponents[0] as u64)?;
    let mut rules: BTreeMap<u32, Vec<Tok>> =
        base.rules().map(|(nt, rhs)| (nt, rhs.to_vec())).collect();
    let mut chain = vec![base.start()];
    let mut next = base.max_nt_id() + 1;
    for i in 1..k as usize {
        let prev = *chain.last().unwrap();
        let mut rhs = vec![Tok::N(prev), Tok::N(prev)];
        if wk[k as usize + i] == 1 {
            rhs.push(Tok::T(0));
        }
        rules.insert(next, rhs);
        chain.push(next);
        next += 1;
    }
    let mut start_rhs = Vec::with_capacity(2 * k as usize - 1);
    for (i, &nt) in chain.iter().enumerate() {
        if i > 0 {
            start_rhs.push(Tok::T(1));
        }
        start_rhs.push(Tok::N(nt));
    }
    rules.insert(next, start_rhs);
    let witness = Slp::new(rules, next);

    let mut syms: Vec<u32> = Vec::with_capacity(total as usize);
    for (i, e) in exponents.iter().enumerate() {
        if i > 0 {
            syms.push(1);
        }
        syms.extend(std::iter::repeat(0).take(*e as usize));
    }
    let word = Word::new(syms, 2)?;

    finish(
        FamilyKind::Repair,
        k,
        None,
        Alphabet::ab(),
        witness,
        word,
        Predicted::Repair { exponents },
    )
}
