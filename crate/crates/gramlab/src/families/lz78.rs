use super::{finish, FamilyInstance, FamilyKind, Predicted};
use crate::ops::{concat, power, substitute, trivial};
use crate::word::{Alphabet, Word};
use crate::{Error, Result};

fn push_run(syms: &mut Vec<u32>, s: u32, count: u64) {
    syms.extend(std::iter::repeat(s).take(count as usize));
}

/// The LZ78-adversarial word
/// s_{m,k} = a^{k(k+1)/2} b^{m(2m+1)} u_{m,k} v_{m,k}
/// with u = ((a^k b^{2m+1} a)^m (a^k b^{m+1})²)^k a^k and
/// v = (b a^k b² a^k … b^m a^k)^{k²}. The prefixes preload the parse
/// dictionary so the u and v parts each force a quadratic number of fresh
/// factors; the witness is a few powers stitched together by substitution.
///
/// The predicted factor count k + 2m + k(2m+2) + k²m is exact for even m and
/// carried as advisory for odd m.
pub fn lz78_hard(m: u64, k: u64, cap: u128) -> Result<FamilyInstance> {
    if m < 1 {
        return Err(Error::Param(format!("lz78 family needs m >= 1, got {m}")));
    }
    if k < 2 {
        return Err(Error::Param(format!("lz78 family needs k >= 2, got {k}")));
    }
    if k > 1 << 16 || m > 1 << 16 {
        return Err(Error::Param(format!("(m,k)=({m},{k}) is far beyond desk scale")));
    }

    let a = trivial(&Word::new(vec![0], 2)?)?;
    let b = trivial(&Word::new(vec![1], 2)?)?;
    let a_k = power(&a, k)?;
    // u core: (x y a)^m (x z)² over a=0, b=1, x=2, y=3, z=4, then
    // x ↦ a^k, y ↦ b^{2m+1}, z ↦ b^{m+1}
    let mut upat: Vec<u32> = Vec::new();
    for _ in 0..m {
        upat.extend([2, 3, 0]);
    }
    upat.extend([2, 4, 2, 4]);
    let core = substitute(&trivial(&Word::new(upat, 5)?)?, &a_k, 2)?;
    let core = substitute(&core, &power(&b, 2 * m + 1)?, 3)?;
    let core = substitute(&core, &power(&b, m + 1)?, 4)?;
    let u = concat(&power(&core, k)?, &a_k)?;
    // v core: b x b² x … b^m x with x ↦ a^k
    let mut vpat: Vec<u32> = Vec::new();
    for i in 1..=m {
        push_run(&mut vpat, 1, i);
        vpat.push(2);
    }
    let vcore = substitute(&trivial(&Word::new(vpat, 3)?)?, &a_k, 2)?;
    let v = power(&vcore, k * k)?;
    let prefix = concat(&power(&a, k * (k + 1) / 2)?, &power(&b, m * (2 * m + 1))?)?;
    let witness = concat(&concat(&prefix, &u)?, &v)?;

    let total = witness.expansion_length()?;
    if total > cap {
        return Err(Error::CapExceeded { len: total, cap });
    }

    let mut syms: Vec<u32> = Vec::with_capacity(total as usize);
    push_run(&mut syms, 0, k * (k + 1) / 2);
    push_run(&mut syms, 1, m * (2 * m + 1));
    for _ in 0..k {
        for _ in 0..m {
            push_run(&mut syms, 0, k);
            push_run(&mut syms, 1, 2 * m + 1);
            syms.push(0);
        }
        for _ in 0..2 {
            push_run(&mut syms, 0, k);
            push_run(&mut syms, 1, m + 1);
        }
    }
    push_run(&mut syms, 0, k);
    for _ in 0..k * k {
        for i in 1..=m {
            push_run(&mut syms, 1, i);
            push_run(&mut syms, 0, k);
        }
    }
    let word = Word::new(syms, 2)?;

    let factor_count = k + 2 * m + k * (2 * m + 2) + k * k * m;
    finish(
        FamilyKind::Lz78,
        k,
        Some(m),
        Alphabet::ab(),
        witness,
        word,
        Predicted::Lz78 { factor_count, asserted: m % 2 == 0 },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compress::lz78_factorize;

    #[test]
    fn small_instance_matches_hand_expansion() {
        let inst = lz78_hard(2, 4, 1 << 20).unwrap();
        let ab = Alphabet::ab();
        let u_piece = format!("{}{}", "aaaabbbbba".repeat(2), "aaaabbb".repeat(2));
        let expected = format!(
            "{}{}{}{}{}",
            "a".repeat(10),
            "b".repeat(10),
            u_piece.repeat(4),
            "a".repeat(4),
            "baaaabbaaaa".repeat(16),
        );
        assert_eq!(inst.word.render(&ab).unwrap(), expected);
        assert_eq!(inst.word.len(), 336);
    }

    #[test]
    fn predicted_count_is_exact_for_even_m() {
        let inst = lz78_hard(2, 4, 1 << 20).unwrap();
        let Predicted::Lz78 { factor_count, asserted } = inst.predicted else {
            unreachable!()
        };
        assert_eq!(factor_count, 64);
        assert!(asserted);
        let fact = lz78_factorize(&inst.word).unwrap();
        assert_eq!(fact.nonempty_factor_count() as u64, factor_count);
    }

    #[test]
    fn odd_m_prediction_is_advisory() {
        let inst = lz78_hard(1, 4, 1 << 20).unwrap();
        let Predicted::Lz78 { asserted, .. } = inst.predicted else {
            unreachable!()
        };
        assert!(!asserted);
    }

    #[test]
    fn witness_grows_like_log_k_plus_m() {
        for (m, k) in [(2u64, 4u64), (2, 8), (4, 8), (4, 16)] {
            let inst = lz78_hard(m, k, 1 << 30).unwrap();
            let budget = 25 * (64 - k.leading_zeros() as u64 + m);
            assert!(
                (inst.witness.size() as u64) <= budget,
                "(m,k)=({m},{k}): witness {} > {budget}",
                inst.witness.size()
            );
        }
    }

    #[test]
    fn cap_refuses_large_instances() {
        assert!(matches!(lz78_hard(4, 16, 1000), Err(Error::CapExceeded { .. })));
    }
}
