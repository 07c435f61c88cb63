//! The `verify-paper` checks: every worked example and published value the
//! library is built around, re-run from scratch and compared against frozen
//! expectations. Each check is independent and named after its content, so
//! `--only <name>` can re-run a single one.

use std::collections::BTreeMap;

use gramlab::bridge::{decode_analysis, encode_slp, phi_encode_word, PsiDecomposition};
use gramlab::compress::{
    bisection, lz78_factorize, render_toks, repair, RepairVariant,
};
use gramlab::families::{
    bisection_hard, bisection_hard_binary, de_bruijn, lz78_hard, repair_hard, Predicted,
};
use gramlab::oracle::{incompressibility_census, smallest_slp, DEFAULT_BUDGET};
use gramlab::slp::expected_shape;
use gramlab::{Alphabet, Slp, Tok, Word};

pub struct Check {
    pub name: &'static str,
    pub run: fn() -> CheckResult,
}

type CheckResult = Result<(), String>;

const CAP: u128 = 100_000_000;

pub fn all() -> Vec<Check> {
    macro_rules! checks {
        ($($name:literal => $f:ident),* $(,)?) => {
            vec![$(Check { name: $name, run: $f }),*]
        };
    }
    checks![
        "bisection-fourteen" => bisection_fourteen,
        "lz78-fifteen" => lz78_fifteen,
        "lz78-unary-six" => lz78_unary_six,
        "repair-unary-27" => repair_unary_27,
        "repair-unary-22" => repair_unary_22,
        "repair-variants-abcabc" => repair_variants_abcabc,
        "repair-maximal-block" => repair_maximal_block,
        "bisection-family-words" => bisection_family_words,
        "bisection-family-factors" => bisection_family_factors,
        "bisection-binary-image" => bisection_binary_image,
        "lz78-family-counts" => lz78_family_counts,
        "lz78-family-listing" => lz78_family_listing,
        "repair-family-exponents" => repair_family_exponents,
        "repair-family-debruijn" => repair_family_debruijn,
        "decode-worked-example" => decode_worked_example,
        "encode-size" => encode_size,
        "census-boundary-unary" => census_boundary_unary,
        "census-boundary-binary" => census_boundary_binary,
        "oracle-tiny" => oracle_tiny,
    ]
}

fn word(s: &str, alphabet: &Alphabet) -> Word {
    Word::from_chars(s, alphabet).expect("check words fit their alphabets")
}

fn eq<T: std::fmt::Debug + PartialEq>(label: &str, got: T, want: T) -> CheckResult {
    if got == want {
        Ok(())
    } else {
        Err(format!("{label}: got {got:?}, want {want:?}"))
    }
}

fn lib<T>(r: gramlab::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn bisection_fourteen() -> CheckResult {
    let ab = Alphabet::ab();
    let w = word("ababbbaabbaaab", &ab);
    let g = lib(bisection(&w))?;
    eq("size", g.size(), 16)?;
    eq("rules", g.rule_count(), 8)?;
    let shape = lib(g.expansion_shape())?;
    let expect = expected_shape(
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
        &ab,
    );
    eq("shape", shape, expect)
}

fn rendered_factors(w: &Word, alphabet: &Alphabet) -> Result<Vec<String>, String> {
    let fact = lib(lz78_factorize(w))?;
    fact.factors().iter().map(|f| lib(f.render(alphabet))).collect()
}

fn lz78_fifteen() -> CheckResult {
    let ab = Alphabet::ab();
    let w = word("aabaaababababaa", &ab);
    let got = rendered_factors(&w, &ab)?;
    eq("factors", got, ["a", "ab", "aa", "aba", "b", "abab", "aa"].map(String::from).to_vec())?;
    let g = lib(gramlab::compress::lz78(&w))?;
    let start = g.rhs(0).ok_or("missing start rule")?;
    eq("start rule length", start.len(), 7)?;
    eq("final start token", start[6], Tok::N(3))
}

fn lz78_unary_six() -> CheckResult {
    let ab = Alphabet::ab();
    let w = word("aaaaaa", &ab);
    let got = rendered_factors(&w, &ab)?;
    eq("factors", got, ["a", "aa", "aaa", ""].map(String::from).to_vec())?;
    let g = lib(gramlab::compress::lz78(&w))?;
    eq("start rule length", g.rhs(0).ok_or("missing start rule")?.len(), 3)
}

fn unary(n: usize) -> Word {
    Word::new(vec![0; n], 1).expect("nonempty unary word")
}

fn repair_unary_27() -> CheckResult {
    let (g, _) = lib(repair(&unary(27), RepairVariant::MaximalString))?;
    eq("start", g.start(), 0)?;
    eq(
        "start rule",
        g.rhs(0).map(<[Tok]>::to_vec),
        Some(vec![Tok::N(3), Tok::N(3), Tok::N(3), Tok::N(1), Tok::T(0)]),
    )?;
    eq("a^2 rule", g.rhs(1).map(<[Tok]>::to_vec), Some(vec![Tok::T(0), Tok::T(0)]))?;
    eq("a^4 rule", g.rhs(2).map(<[Tok]>::to_vec), Some(vec![Tok::N(1), Tok::N(1)]))?;
    eq("a^8 rule", g.rhs(3).map(<[Tok]>::to_vec), Some(vec![Tok::N(2), Tok::N(2)]))?;
    eq("size", g.size(), 11)
}

fn repair_unary_22() -> CheckResult {
    let (g, _) = lib(repair(&unary(22), RepairVariant::MaximalString))?;
    eq(
        "start rule",
        g.rhs(0).map(<[Tok]>::to_vec),
        Some(vec![Tok::N(3), Tok::N(3), Tok::N(2), Tok::N(1)]),
    )?;
    eq("size", g.size(), 10)
}

fn repair_variants_abcabc() -> CheckResult {
    let abc = lib(Alphabet::letters(3))?;
    let w = word("abcabc", &abc);
    let (g, _) = lib(repair(&w, RepairVariant::MaximalString))?;
    eq("maximal size", g.size(), 5)?;
    let start = g.rhs(g.start()).ok_or("missing start rule")?;
    let [Tok::N(x), Tok::N(y)] = start else {
        return Err(format!("maximal start rule is not two nonterminals: {start:?}"));
    };
    eq("maximal start repeats one rule", x, y)?;
    eq(
        "maximal inner rule",
        g.rhs(*x).map(<[Tok]>::to_vec),
        Some(vec![Tok::T(0), Tok::T(1), Tok::T(2)]),
    )?;
    let (g, _) = lib(repair(&w, RepairVariant::Digram))?;
    eq("digram size", g.size(), 6)
}

fn repair_maximal_block() -> CheckResult {
    let ab = Alphabet::ab();
    let w = word("aabbaabb", &ab);
    let (_, trace) = lib(repair(&w, RepairVariant::MaximalString))?;
    let first = trace.rounds.first().ok_or("no rounds")?;
    eq("maximal first selection", render_toks(&first.selected, &ab), "aabb".into())?;
    let (g, trace) = lib(repair(&w, RepairVariant::Digram))?;
    let selections: Vec<String> =
        trace.rounds.iter().map(|r| render_toks(&r.selected, &ab)).collect();
    eq("digram selections", selections, ["aa", "X1b", "X2b"].map(String::from).to_vec())?;
    eq("digram size", g.size(), 8)
}

fn bisection_family_words() -> CheckResult {
    let inst = lib(bisection_hard(2, CAP))?;
    eq("k=2 word", lib(inst.word.render(&inst.alphabet))?, "0a1aa0a1".into())?;
    let Predicted::Bisection { m_k, .. } = inst.predicted else {
        return Err("k=2 instance carries the wrong prediction".into());
    };
    eq("m_2", m_k, 1)?;
    let inst = lib(bisection_hard(4, CAP))?;
    eq(
        "k=4 word",
        lib(inst.word.render(&inst.alphabet))?,
        "00aa01aa10aa11aaa00aa01aa10aa11aaa00aa01aa10aa11".into(),
    )?;
    for (k, want) in [(4u64, 2u64), (6, 5), (8, 29)] {
        let inst = lib(bisection_hard(k, CAP))?;
        let Predicted::Bisection { m_k, .. } = inst.predicted else {
            return Err(format!("k={k} instance carries the wrong prediction"));
        };
        eq(&format!("m_{k}"), m_k, want)?;
    }
    Ok(())
}

fn bisection_family_factors() -> CheckResult {
    let inst = lib(bisection_hard(4, CAP))?;
    let Predicted::Bisection { factor_set, .. } = &inst.predicted else {
        return Err("k=4 instance carries the wrong prediction".into());
    };
    let got: Vec<String> = factor_set
        .iter()
        .map(|f| lib(f.render(&inst.alphabet)))
        .collect::<Result<_, _>>()?;
    let want = [
        "00aa", "01aa", "10aa", "11aa", "a00a", "a01a", "a10a", "a11a", "aa00", "aa01",
        "aa10", "aa11",
    ]
    .map(String::from)
    .to_vec();
    eq("forced factor set", got, want)
}

fn bisection_binary_image() -> CheckResult {
    let inst = lib(bisection_hard_binary(4, CAP))?;
    eq("word length", inst.word.len(), 96)?;
    let Predicted::Bisection { factor_set, .. } = &inst.predicted else {
        return Err("binary instance carries the wrong prediction".into());
    };
    eq("forced factor count", factor_set.len(), 12)?;
    eq("first factor image", lib(factor_set[0].render(&inst.alphabet))?, "00001010".into())
}

fn lz78_family_counts() -> CheckResult {
    let inst = lib(lz78_hard(2, 4, CAP))?;
    eq("word length", inst.word.len(), 336)?;
    let Predicted::Lz78 { factor_count, asserted } = inst.predicted else {
        return Err("instance carries the wrong prediction".into());
    };
    eq("predicted factors", factor_count, 64)?;
    eq("prediction asserted", asserted, true)?;
    let fact = lib(lz78_factorize(&inst.word))?;
    eq("actual factors", fact.nonempty_factor_count(), 64)
}

fn lz78_family_listing() -> CheckResult {
    let inst = lib(lz78_hard(2, 4, CAP))?;
    let got = rendered_factors(&inst.word, &inst.alphabet)?;
    // the parse in full: single-letter runs, then the u factors row by row,
    // then the v factors, two interleaved columns; the parse ends flush on a
    // factor boundary, so the final repeated factor is empty
    let want = [
        "a", "aa", "aaa", "aaaa",
        "b", "bb", "bbb", "bbbb",
        "aaaab", "bbbba", "aaaabb", "bbba", "aaaabbb", "aaaabbba",
        "aaab", "bbbbaa", "aaabb", "bbbaa", "aaabbb", "aaaabbbaa",
        "aab", "bbbbaaa", "aabb", "bbbaaa", "aabbb", "aaaabbbaaa",
        "ab", "bbbbaaaa", "abb", "bbbaaaa", "abbb", "aaaabbbaaaa",
        "ba", "aaabba", "aaaba", "aaabbaa", "aaba", "aaabbaaa", "aba", "aaabbaaaa",
        "baa", "aabba", "aaabaa", "aabbaa", "aabaa", "aabbaaa", "abaa", "aabbaaaa",
        "baaa", "abba", "aaabaaa", "abbaa", "aabaaa", "abbaaa", "abaaa", "abbaaaa",
        "baaaa", "bba", "aaabaaaa", "bbaa", "aabaaaa", "bbaaa", "abaaaa", "bbaaaa",
        "",
    ]
    .map(String::from)
    .to_vec();
    eq("factor listing", got, want)
}

fn repair_family_exponents() -> CheckResult {
    let inst = lib(repair_hard(4, CAP))?;
    let Predicted::Repair { exponents } = &inst.predicted else {
        return Err("instance carries the wrong prediction".into());
    };
    eq("k=4 exponents", exponents.clone(), vec![20, 41, 82, 165])?;
    let inst = lib(repair_hard(2, CAP))?;
    eq("k=2 word", lib(inst.word.render(&inst.alphabet))?, "aaaabaaaaaaaaa".into())
}

fn repair_family_debruijn() -> CheckResult {
    let bits = Alphabet::bits();
    for (order, want) in [(1u32, "10"), (2, "1100"), (3, "11100010"), (4, "1111000010011010")] {
        let db = lib(de_bruijn(order))?;
        eq(&format!("order {order}"), lib(db.bits.render(&bits))?, want.into())?;
    }
    Ok(())
}

fn decode_worked_example() -> CheckResult {
    let mut rules = BTreeMap::new();
    rules.insert(1, vec![Tok::T(0), Tok::T(0)]);
    rules.insert(
        2,
        vec![Tok::T(0), Tok::T(1), Tok::T(0), Tok::T(0), Tok::T(0), Tok::T(1), Tok::T(0)],
    );
    rules.insert(
        3,
        vec![Tok::T(1), Tok::T(0), Tok::T(0), Tok::T(1), Tok::T(0), Tok::T(0), Tok::T(0)],
    );
    let mut long = vec![Tok::T(0); 3];
    long.push(Tok::T(1));
    long.extend(vec![Tok::T(0); 5]);
    long.push(Tok::N(1));
    long.extend(vec![Tok::T(0); 3]);
    long.push(Tok::N(2));
    long.extend([Tok::T(0), Tok::T(0), Tok::T(1), Tok::T(1), Tok::N(3), Tok::T(0), Tok::T(0)]);
    rules.insert(4, long);
    rules.insert(5, vec![Tok::N(4), Tok::T(1)]);
    let g = Slp::new(rules, 5);

    let analysis = lib(decode_analysis(&g, 12))?;
    let psi = |nt: u32| analysis.psi[&nt];
    eq("psi 1", psi(1), PsiDecomposition { left: None, middle: None, right: 2 })?;
    eq("psi 2", psi(2), PsiDecomposition { left: Some(1), middle: Some(2), right: 1 })?;
    eq("psi 3", psi(3), PsiDecomposition { left: Some(0), middle: Some(3), right: 3 })?;
    eq("psi 4", psi(4), PsiDecomposition { left: Some(3), middle: Some(4), right: 5 })?;

    let d = &analysis.slp;
    eq("start", d.start(), 5)?;
    eq(
        "start rule",
        d.rhs(5).map(<[Tok]>::to_vec),
        Some(vec![Tok::T(3), Tok::N(4), Tok::T(5)]),
    )?;
    eq(
        "long rule",
        d.rhs(4).map(<[Tok]>::to_vec),
        Some(vec![Tok::T(11), Tok::N(2), Tok::T(3), Tok::T(0), Tok::T(0), Tok::N(3)]),
    )?;
    eq("middle of 2", d.rhs(2).map(<[Tok]>::to_vec), Some(vec![Tok::T(3)]))?;
    eq("middle of 3", d.rhs(3).map(<[Tok]>::to_vec), Some(vec![Tok::T(2)]))?;
    eq("bare zero run keeps no rule", d.rhs(1).map(<[Tok]>::to_vec), None)?;
    eq("derived word", lib(d.expand(1 << 16))?.symbols().to_vec(), vec![3, 11, 3, 3, 0, 0, 2, 5])
}

fn encode_size() -> CheckResult {
    let abc = lib(Alphabet::letters(3))?;
    let w = word("abcabc", &abc);
    let (g, _) = lib(repair(&w, RepairVariant::MaximalString))?;
    let enc = lib(encode_slp(&g, 3))?;
    eq("encoded size", enc.size(), g.size() + 2 * 3 - 1)?;
    let image = lib(phi_encode_word(&w))?;
    eq(
        "encoded expansion",
        lib(enc.expand(1 << 16))?.symbols().to_vec(),
        image.symbols().to_vec(),
    )
}

fn census_boundary_unary() -> CheckResult {
    let report = lib(incompressibility_census(1, 7))?;
    eq("n_1", report.n_k, 5)?;
    let counts: Vec<u64> = report.rows.iter().map(|r| r.incompressible).collect();
    eq("counts by length", counts, vec![1, 1, 1, 1, 1, 0, 0])?;
    eq("boundary", report.boundary_ok, true)
}

fn census_boundary_binary() -> CheckResult {
    let report = lib(incompressibility_census(2, 14))?;
    eq("n_2", report.n_k, 13)?;
    let at = |n: usize| report.rows.iter().find(|r| r.n == n).map(|r| r.incompressible);
    if at(13) == Some(0) {
        return Err("no incompressible word of length 13".into());
    }
    eq("length 14", at(14), Some(0))?;
    eq("boundary", report.boundary_ok, true)
}

fn oracle_tiny() -> CheckResult {
    let ab = Alphabet::ab();
    let abc = lib(Alphabet::letters(3))?;
    let cases = [
        (word("aaaaa", &ab), 5),
        (word("aaaaaa", &ab), 5),
        (word("aaaa", &ab), 4),
        (word("ab", &ab), 2),
        (word("abab", &ab), 4),
        (word("abcabc", &abc), 5),
    ];
    for (w, want) in cases {
        let (g, _) = lib(smallest_slp(&w, DEFAULT_BUDGET))?;
        eq(&format!("g({:?})", w.symbols()), g.size(), want)?;
    }
    Ok(())
}
