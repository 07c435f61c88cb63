use super::{finish, FamilyInstance, FamilyKind, Predicted};
use crate::ops::{concat, power, substitute, trivial};
use crate::word::{Alphabet, Word};
use crate::{Error, Result};

fn ceil_log2(k: u64) -> u32 {
    k.next_power_of_two().trailing_zeros()
}

/// `j` written in binary, padded with leading zeros to ⌈log₂ k⌉ bits.
pub fn bin_pad(k: u64, j: u64) -> Result<Word> {
    if k < 2 {
        return Err(Error::Param(format!("bin_pad needs k >= 2, got {k}")));
    }
    if j >= k {
        return Err(Error::Param(format!("bin_pad index {j} out of range for k={k}")));
    }
    let width = ceil_log2(k);
    let syms = (0..width).rev().map(|b| ((j >> b) & 1) as u32).collect();
    Word::new(syms, 2)
}

/// The bisection-adversarial word s_k over {0, 1, a}: k counter blocks
/// bin_k(0) … bin_k(k−1), each padded to length 2^{k−⌈log₂k⌉} with a-runs
/// whose length shifts by one from block to block across the m_k repetitions.
/// Splitting at powers of two then produces (m_k+1)·k pairwise distinct
/// factors, while the witness stays linear in k.
pub fn bisection_hard(k: u64, cap: u128) -> Result<FamilyInstance> {
    if k < 2 {
        return Err(Error::Param(format!("bisection family needs k >= 2, got {k}")));
    }
    let lg = ceil_log2(k);
    if k - lg as u64 >= 40 {
        return Err(Error::Param(format!("k={k} is far beyond desk scale")));
    }
    let block_len = 1u64 << (k - lg as u64);
    if block_len <= lg as u64 {
        return Err(Error::Param(format!(
            "k={k} leaves no padding room (2^{} <= {lg})",
            k - lg as u64
        )));
    }
    let m_k = block_len - lg as u64;

    // witness: u = bin(0) a^m bin(1) a^m … bin(k−1) via one substitution,
    // s = (u a^{m+1})^m u
    let a = trivial(&Word::new(vec![2], 3)?)?;
    let run = power(&a, m_k)?;
    let mut pat = Vec::new();
    for j in 0..k {
        pat.extend_from_slice(bin_pad(k, j)?.symbols());
        if j + 1 < k {
            pat.push(3);
        }
    }
    let u = substitute(&trivial(&Word::new(pat, 4)?)?, &run, 3)?;
    let block = concat(&u, &power(&a, m_k + 1)?)?;
    let witness = concat(&power(&block, m_k)?, &u)?;

    let total = witness.expansion_length()?;
    if total > cap {
        return Err(Error::CapExceeded { len: total, cap });
    }

    let mut u_syms: Vec<u32> = Vec::new();
    for j in 0..k {
        u_syms.extend_from_slice(bin_pad(k, j)?.symbols());
        if j + 1 < k {
            u_syms.extend(std::iter::repeat(2).take(m_k as usize));
        }
    }
    let mut syms = Vec::with_capacity(total as usize);
    for _ in 0..m_k {
        syms.extend_from_slice(&u_syms);
        syms.extend(std::iter::repeat(2).take(m_k as usize + 1));
    }
    syms.extend_from_slice(&u_syms);
    let word = Word::new(syms, 3)?;

    let mut factor_set = Vec::with_capacity(((m_k + 1) * k) as usize);
    for i in 0..=m_k {
        for j in 0..k {
            let mut f: Vec<u32> = std::iter::repeat(2).take(i as usize).collect();
            f.extend_from_slice(bin_pad(k, j)?.symbols());
            f.extend(std::iter::repeat(2).take((m_k - i) as usize));
            factor_set.push(Word::new(f, 3)?);
        }
    }

    finish(
        FamilyKind::Bisection,
        k,
        None,
        Alphabet::bits_a(),
        witness,
        word,
        Predicted::Bisection { m_k, factor_set },
    )
}

/// Binary image of [`bisection_hard`] under 0 ↦ 00, 1 ↦ 01, a ↦ 10; the
/// witness is the symbol-wise image of the ternary witness, at most twice
/// its size.
pub fn bisection_hard_binary(k: u64, cap: u128) -> Result<FamilyInstance> {
    let base = bisection_hard(k, cap / 2)?;
    let f = |s: u32| -> Vec<u32> {
        match s {
            0 => vec![0, 0],
            1 => vec![0, 1],
            _ => vec![1, 0],
        }
    };
    let word = base.word.map_symbols(2, f)?;
    let witness = base.witness.map_terminals(f)?;
    let (m_k, factor_set) = match base.predicted {
        Predicted::Bisection { m_k, factor_set } => {
            let mapped = factor_set
                .iter()
                .map(|w| w.map_symbols(2, f))
                .collect::<Result<Vec<Word>>>()?;
            (m_k, mapped)
        }
        _ => unreachable!(),
    };
    finish(
        FamilyKind::BisectionBinary,
        k,
        None,
        Alphabet::bits(),
        witness,
        word,
        Predicted::Bisection { m_k, factor_set },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn render(w: &Word) -> String {
        w.render(&Alphabet::bits_a()).unwrap()
    }

    #[test]
    fn bin_pad_widths_and_values() {
        assert_eq!(bin_pad(9, 3).unwrap().render(&Alphabet::bits()).unwrap(), "0011");
        assert_eq!(bin_pad(4, 0).unwrap().render(&Alphabet::bits()).unwrap(), "00");
        assert_eq!(bin_pad(4, 3).unwrap().render(&Alphabet::bits()).unwrap(), "11");
        assert_eq!(bin_pad(2, 1).unwrap().render(&Alphabet::bits()).unwrap(), "1");
        assert!(bin_pad(4, 4).is_err());
        assert!(bin_pad(1, 0).is_err());
    }

    #[test]
    fn k4_matches_known_values() {
        let inst = bisection_hard(4, 1 << 20).unwrap();
        match &inst.predicted {
            Predicted::Bisection { m_k, factor_set } => {
                assert_eq!(*m_k, 2);
                assert_eq!(factor_set.len(), 12);
                let rendered: Vec<String> = factor_set.iter().map(render).collect();
                assert_eq!(
                    rendered,
                    [
                        "00aa", "01aa", "10aa", "11aa", "a00a", "a01a", "a10a", "a11a",
                        "aa00", "aa01", "aa10", "aa11"
                    ]
                );
            }
            _ => panic!("wrong prediction kind"),
        }
        // s_4 = (u_4 a^3)^2 u_4 with u_4 = 00aa01aa10aa11
        let u4 = "00aa01aa10aa11";
        assert_eq!(render(&inst.word), format!("{u4}aaa{u4}aaa{u4}"));
        assert_eq!(inst.word.len(), 48);
    }

    #[test]
    fn smallest_k_degenerates_cleanly() {
        let inst = bisection_hard(2, 1 << 20).unwrap();
        assert_eq!(render(&inst.word), "0a1aa0a1");
        assert!(bisection_hard(3, 1 << 20).is_err());
    }

    #[test]
    fn block_split_recovers_the_factor_set() {
        for k in [2u64, 4, 6, 8] {
            let inst = bisection_hard(k, 1 << 30).unwrap();
            let Predicted::Bisection { m_k, factor_set } = &inst.predicted else {
                unreachable!()
            };
            let block = (m_k + ceil_log2(k) as u64) as usize;
            assert_eq!(inst.word.len() % block, 0);
            let chunks: BTreeSet<&[u32]> =
                inst.word.symbols().chunks(block).collect();
            let expected: BTreeSet<&[u32]> =
                factor_set.iter().map(|w| w.symbols()).collect();
            assert_eq!(chunks, expected);
            assert_eq!(expected.len(), ((m_k + 1) * k) as usize);
        }
    }

    #[test]
    fn witness_stays_linear_in_k() {
        for k in [2u64, 4, 6, 8] {
            let inst = bisection_hard(k, 1 << 30).unwrap();
            assert!(
                inst.witness.size() as u64 <= 40 * k,
                "k={k}: witness {}",
                inst.witness.size()
            );
        }
    }

    #[test]
    fn binary_image_doubles_symbolwise() {
        let inst = bisection_hard_binary(4, 1 << 20).unwrap();
        assert_eq!(inst.word.len(), 96);
        let Predicted::Bisection { factor_set, .. } = &inst.predicted else {
            unreachable!()
        };
        assert_eq!(factor_set.len(), 12);
        assert_eq!(
            factor_set[0].render(&Alphabet::bits()).unwrap(),
            "00001010"
        );
        let base = bisection_hard(4, 1 << 20).unwrap();
        assert!(inst.witness.size() <= 2 * base.witness.size());
    }

    #[test]
    fn cap_refuses_before_materializing() {
        assert!(matches!(
            bisection_hard(8, 100),
            Err(Error::CapExceeded { len: 7680, cap: 100 })
        ));
    }
}
