//! Straight-line programs.
//!
//! An SLP is a context-free grammar with exactly one production per
//! nonterminal and an acyclic reference relation, so it derives exactly one
//! word. Its size is the total length of all right-hand sides; nonterminals
//! and terminals live in separate id spaces.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::{Error, Result, Word};

/// One right-hand-side token: terminal symbol or nonterminal reference.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tok {
    T(u32),
    N(u32),
}

impl std::fmt::Debug for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::T(s) => write!(f, "t:{s}"),
            Tok::N(n) => write!(f, "n:{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slp {
    rules: BTreeMap<u32, Vec<Tok>>,
    start: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// The start nonterminal has no production.
    StartUndefined { start: u32 },
    /// A production with an empty right-hand side.
    EmptyRhs { nt: u32 },
    /// A referenced nonterminal without a production.
    Dangling { nt: u32, referenced_by: u32 },
    /// Nonterminals whose reference relation is cyclic.
    Cycle { members: Vec<u32> },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::StartUndefined { start } => {
                write!(f, "start nonterminal n:{start} has no production")
            }
            Violation::EmptyRhs { nt } => write!(f, "empty right-hand side for n:{nt}"),
            Violation::Dangling { nt, referenced_by } => {
                write!(f, "n:{nt} referenced by n:{referenced_by} but never produced")
            }
            Violation::Cycle { members } => {
                write!(f, "cyclic references among:")?;
                for m in members {
                    write!(f, " n:{m}")?;
                }
                Ok(())
            }
        }
    }
}

/// Outcome of [`Slp::validate`]: empty means the grammar is a valid SLP.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

impl Slp {
    pub fn new(rules: BTreeMap<u32, Vec<Tok>>, start: u32) -> Self {
        Slp { rules, start }
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn rules(&self) -> impl Iterator<Item = (u32, &[Tok])> {
        self.rules.iter().map(|(nt, rhs)| (*nt, rhs.as_slice()))
    }

    pub fn rhs(&self, nt: u32) -> Option<&[Tok]> {
        self.rules.get(&nt).map(|r| r.as_slice())
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    /// Total length of all right-hand sides.
    pub fn size(&self) -> usize {
        self.rules.values().map(|r| r.len()).sum()
    }

    pub fn max_nt_id(&self) -> u32 {
        let in_rules = self.rules.keys().next_back().copied().unwrap_or(0);
        in_rules.max(self.start)
    }

    /// Collects every violation instead of stopping at the first: missing
    /// start production, empty right-hand sides, dangling references, cycles.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if !self.rules.contains_key(&self.start) {
            violations.push(Violation::StartUndefined { start: self.start });
        }
        for (&nt, rhs) in &self.rules {
            if rhs.is_empty() {
                violations.push(Violation::EmptyRhs { nt });
            }
            for tok in rhs {
                if let Tok::N(m) = tok {
                    if !self.rules.contains_key(m) {
                        violations.push(Violation::Dangling { nt: *m, referenced_by: nt });
                    }
                }
            }
        }
        // Count only references between existing productions; anything left
        // unemitted by the topological pass sits on a cycle.
        let mut cyclic: Vec<u32> = Vec::new();
        if self.topo_order().is_none() {
            let order = self.partial_topo_order();
            let emitted: BTreeSet<u32> = order.into_iter().collect();
            cyclic = self.rules.keys().filter(|nt| !emitted.contains(nt)).copied().collect();
        }
        if !cyclic.is_empty() {
            violations.push(Violation::Cycle { members: cyclic });
        }
        ValidationReport { violations }
    }

    /// Productions ordered referenced-before-referencing, lowest id first
    /// among the ready ones; `None` if the reference relation is cyclic.
    pub fn topo_order(&self) -> Option<Vec<u32>> {
        let order = self.partial_topo_order();
        if order.len() == self.rules.len() {
            Some(order)
        } else {
            None
        }
    }

    fn partial_topo_order(&self) -> Vec<u32> {
        // pending[a] = number of tokens in a's rhs that reference an existing
        // production not yet emitted; dependents[b] = rules waiting on b.
        let mut pending: BTreeMap<u32, usize> = BTreeMap::new();
        let mut dependents: HashMap<u32, Vec<u32>> = HashMap::new();
        for (&nt, rhs) in &self.rules {
            let mut n = 0;
            for tok in rhs {
                if let Tok::N(m) = tok {
                    if self.rules.contains_key(m) {
                        n += 1;
                        dependents.entry(*m).or_default().push(nt);
                    }
                }
            }
            pending.insert(nt, n);
        }
        let mut ready: BTreeSet<u32> =
            pending.iter().filter(|(_, n)| **n == 0).map(|(nt, _)| *nt).collect();
        let mut order = Vec::with_capacity(self.rules.len());
        while let Some(&nt) = ready.iter().next() {
            ready.remove(&nt);
            order.push(nt);
            if let Some(deps) = dependents.get(&nt) {
                for &d in deps {
                    let n = pending.get_mut(&d).unwrap();
                    *n -= 1;
                    if *n == 0 {
                        ready.insert(d);
                    }
                }
            }
        }
        order
    }

    /// Nonterminals reachable from the start.
    pub fn reachable(&self) -> BTreeSet<u32> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![self.start];
        while let Some(nt) = stack.pop() {
            if !seen.insert(nt) {
                continue;
            }
            if let Some(rhs) = self.rules.get(&nt) {
                for tok in rhs {
                    if let Tok::N(m) = tok {
                        if !seen.contains(m) {
                            stack.push(*m);
                        }
                    }
                }
            }
        }
        seen
    }

    /// Copy without productions unreachable from the start.
    pub fn pruned(&self) -> Slp {
        let keep = self.reachable();
        let rules = self
            .rules
            .iter()
            .filter(|(nt, _)| keep.contains(nt))
            .map(|(nt, rhs)| (*nt, rhs.clone()))
            .collect();
        Slp { rules: rules, start: self.start }
    }

    /// Copy with every nonterminal id shifted by `offset`.
    pub fn renumbered(&self, offset: u32) -> Slp {
        let rules = self
            .rules
            .iter()
            .map(|(nt, rhs)| {
                let rhs = rhs
                    .iter()
                    .map(|tok| match tok {
                        Tok::T(s) => Tok::T(*s),
                        Tok::N(m) => Tok::N(m + offset),
                    })
                    .collect();
                (nt + offset, rhs)
            })
            .collect();
        Slp { rules, start: self.start + offset }
    }

    /// Terminals occurring in productions reachable from the start, i.e. the
    /// set of symbols of the derived word.
    pub fn reachable_terminals(&self) -> BTreeSet<u32> {
        let keep = self.reachable();
        let mut terms = BTreeSet::new();
        for (&nt, rhs) in &self.rules {
            if !keep.contains(&nt) {
                continue;
            }
            for tok in rhs {
                if let Tok::T(s) = tok {
                    terms.insert(*s);
                }
            }
        }
        terms
    }

    /// Symbol-wise homomorphic image: each terminal token is replaced in
    /// place by its (nonempty) image sequence. Size grows by at most the
    /// longest image factor.
    pub fn map_terminals(&self, f: impl Fn(u32) -> Vec<u32>) -> Result<Slp> {
        let mut rules = BTreeMap::new();
        for (&nt, rhs) in &self.rules {
            let mut out = Vec::with_capacity(rhs.len());
            for tok in rhs {
                match tok {
                    Tok::N(m) => out.push(Tok::N(*m)),
                    Tok::T(s) => {
                        let image = f(*s);
                        if image.is_empty() {
                            return Err(Error::EmptyImage(*s));
                        }
                        out.extend(image.into_iter().map(Tok::T));
                    }
                }
            }
            rules.insert(nt, out);
        }
        Ok(Slp { rules, start: self.start })
    }

    /// Length of the derived word, via checked 128-bit arithmetic.
    pub fn expansion_length(&self) -> Result<u128> {
        let lens = self.lengths()?;
        Ok(lens[&self.start])
    }

    // Expansion lengths of all nonterminals reachable from the start,
    // computed iteratively so deep chains cannot overflow the call stack.
    fn lengths(&self) -> Result<BTreeMap<u32, u128>> {
        let mut lens: BTreeMap<u32, u128> = BTreeMap::new();
        // (nt, children_scheduled)
        let mut stack: Vec<(u32, bool)> = vec![(self.start, false)];
        let mut in_progress: BTreeSet<u32> = BTreeSet::new();
        while let Some((nt, expanded)) = stack.pop() {
            if lens.contains_key(&nt) {
                continue;
            }
            let rhs = match self.rules.get(&nt) {
                Some(r) => r,
                None => {
                    return Err(Error::InvalidGrammar(self.validate()));
                }
            };
            if expanded {
                in_progress.remove(&nt);
                let mut total: u128 = 0;
                for tok in rhs {
                    let add = match tok {
                        Tok::T(_) => 1,
                        Tok::N(m) => lens[m],
                    };
                    total = total.checked_add(add).ok_or(Error::LengthOverflow)?;
                }
                lens.insert(nt, total);
            } else {
                if !in_progress.insert(nt) {
                    return Err(Error::InvalidGrammar(self.validate()));
                }
                stack.push((nt, true));
                for tok in rhs {
                    if let Tok::N(m) = tok {
                        if !lens.contains_key(m) {
                            if in_progress.contains(m) {
                                return Err(Error::InvalidGrammar(self.validate()));
                            }
                            stack.push((*m, false));
                        }
                    }
                }
            }
        }
        Ok(lens)
    }

    /// Derives the word, refusing early when its length exceeds `cap`.
    ///
    /// The result's alphabet size is one past the highest terminal reachable
    /// from the start.
    pub fn expand(&self, cap: u128) -> Result<Word> {
        let lens = self.lengths()?;
        let total = lens[&self.start];
        if total > cap {
            return Err(Error::CapExceeded { len: total, cap });
        }
        let keep = self.reachable();
        let order: Vec<u32> = match self.topo_order() {
            Some(o) => o.into_iter().filter(|nt| keep.contains(nt)).collect(),
            None => return Err(Error::InvalidGrammar(self.validate())),
        };
        // Expansions are dropped once every referencing rule has consumed
        // them, so peak memory stays proportional to the output.
        let mut uses: HashMap<u32, usize> = HashMap::new();
        for &nt in &order {
            for tok in &self.rules[&nt] {
                if let Tok::N(m) = tok {
                    *uses.entry(*m).or_insert(0) += 1;
                }
            }
        }
        let mut vals: HashMap<u32, Vec<u32>> = HashMap::new();
        let mut alphabet_size: u32 = 0;
        for &nt in &order {
            let rhs = &self.rules[&nt];
            let mut val: Vec<u32> = Vec::with_capacity(lens[&nt] as usize);
            for tok in rhs {
                match tok {
                    Tok::T(s) => {
                        alphabet_size = alphabet_size.max(s + 1);
                        val.push(*s);
                    }
                    Tok::N(m) => {
                        val.extend_from_slice(&vals[m]);
                        let u = uses.get_mut(m).unwrap();
                        *u -= 1;
                        if *u == 0 {
                            vals.remove(m);
                        }
                    }
                }
            }
            vals.insert(nt, val);
        }
        let symbols = vals.remove(&self.start).unwrap();
        Word::new(symbols, alphabet_size)
    }

    /// The grammar's structure with nonterminal names erased: the derived
    /// word plus the sorted multiset of rules, each rule given as the list of
    /// its tokens' expansions. Grammars that differ only in nonterminal ids
    /// compare equal. Expansions are materialized per rule, so this is meant
    /// for small reference grammars.
    pub fn expansion_shape(&self) -> Result<(Vec<u32>, Vec<Vec<Vec<u32>>>)> {
        let report = self.validate();
        if !report.is_ok() {
            return Err(Error::InvalidGrammar(report));
        }
        let order = self.topo_order().expect("validated acyclic");
        let mut vals: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for nt in order {
            let mut val = Vec::new();
            for tok in &self.rules[&nt] {
                match tok {
                    Tok::T(s) => val.push(*s),
                    Tok::N(m) => val.extend_from_slice(&vals[m]),
                }
            }
            vals.insert(nt, val);
        }
        let mut shape: Vec<Vec<Vec<u32>>> = self
            .rules
            .values()
            .map(|rhs| {
                rhs.iter()
                    .map(|tok| match tok {
                        Tok::T(s) => vec![*s],
                        Tok::N(m) => vals[m].clone(),
                    })
                    .collect()
            })
            .collect();
        shape.sort();
        Ok((vals[&self.start].clone(), shape))
    }
}

/// Builds a value comparable with [`Slp::expansion_shape`] from rendered
/// strings: the derived word plus, per rule, the expansions of its tokens.
/// The rule's own expansion is given alongside and checked against the
/// concatenation of its parts, which catches typos in hand-written tables.
pub fn expected_shape(
    w: &Word,
    rules: &[(&str, Vec<&str>)],
    alphabet: &crate::Alphabet,
) -> (Vec<u32>, Vec<Vec<Vec<u32>>>) {
    let syms = |s: &str| -> Vec<u32> {
        Word::from_chars(s, alphabet).expect("in alphabet").symbols().to_vec()
    };
    let mut shape: Vec<Vec<Vec<u32>>> = Vec::new();
    for (whole, parts) in rules {
        let toks: Vec<Vec<u32>> = parts.iter().map(|p| syms(p)).collect();
        let joined: Vec<u32> = toks.iter().flatten().copied().collect();
        assert_eq!(joined, syms(whole), "rule table inconsistent at {whole}");
        shape.push(toks);
    }
    shape.sort();
    (w.symbols().to_vec(), shape)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slp(rules: &[(u32, Vec<Tok>)], start: u32) -> Slp {
        Slp::new(rules.iter().cloned().collect(), start)
    }

    #[test]
    fn valid_grammar_reports_ok() {
        use Tok::*;
        let g = slp(&[(0, vec![N(1), N(1), T(0)]), (1, vec![T(0), T(1)])], 0);
        assert!(g.validate().is_ok());
        assert_eq!(g.size(), 5);
        assert_eq!(g.expansion_length().unwrap(), 5);
        let w = g.expand(10).unwrap();
        assert_eq!(w.symbols(), &[0, 1, 0, 1, 0]);
        assert_eq!(w.alphabet_size(), 2);
    }

    #[test]
    fn violations_are_all_collected() {
        use Tok::*;
        // start undefined, empty rhs, dangling reference, 2-cycle
        let g = slp(
            &[
                (1, vec![]),
                (2, vec![N(9), T(0)]),
                (3, vec![N(4)]),
                (4, vec![N(3)]),
            ],
            0,
        );
        let report = g.validate();
        assert!(!report.is_ok());
        assert!(report.violations.contains(&Violation::StartUndefined { start: 0 }));
        assert!(report.violations.contains(&Violation::EmptyRhs { nt: 1 }));
        assert!(report
            .violations
            .contains(&Violation::Dangling { nt: 9, referenced_by: 2 }));
        assert!(report.violations.contains(&Violation::Cycle { members: vec![3, 4] }));
    }

    #[test]
    fn self_reference_is_a_cycle() {
        use Tok::*;
        let g = slp(&[(0, vec![N(0), T(0)])], 0);
        let report = g.validate();
        assert_eq!(report.violations, vec![Violation::Cycle { members: vec![0] }]);
        assert!(g.expansion_length().is_err());
    }

    #[test]
    fn expand_refuses_over_cap() {
        use Tok::*;
        // doubling chain: 2^10 symbols
        let mut rules: BTreeMap<u32, Vec<Tok>> = BTreeMap::new();
        rules.insert(0, vec![T(0), T(0)]);
        for i in 1..10 {
            rules.insert(i, vec![N(i - 1), N(i - 1)]);
        }
        let g = Slp::new(rules, 9);
        assert_eq!(g.expansion_length().unwrap(), 1024);
        assert!(matches!(g.expand(1023), Err(Error::CapExceeded { len: 1024, cap: 1023 })));
        assert_eq!(g.expand(1024).unwrap().len(), 1024);
    }

    #[test]
    fn length_overflow_is_reported() {
        use Tok::*;
        // 2^130 symbols does not fit in u128
        let mut rules: BTreeMap<u32, Vec<Tok>> = BTreeMap::new();
        rules.insert(0, vec![T(0), T(0)]);
        for i in 1..130 {
            rules.insert(i, vec![N(i - 1), N(i - 1)]);
        }
        let g = Slp::new(rules, 129);
        assert!(matches!(g.expansion_length(), Err(Error::LengthOverflow)));
    }

    #[test]
    fn topo_order_is_referenced_before_referencing() {
        use Tok::*;
        let g = slp(
            &[(0, vec![N(2), N(1)]), (1, vec![N(2), T(0)]), (2, vec![T(0), T(1)])],
            0,
        );
        let order = g.topo_order().unwrap();
        let pos = |nt: u32| order.iter().position(|x| *x == nt).unwrap();
        assert!(pos(2) < pos(1));
        assert!(pos(1) < pos(0));
        assert!(pos(2) < pos(0));
    }

    #[test]
    fn pruned_drops_unreachable() {
        use Tok::*;
        let g = slp(&[(0, vec![T(0)]), (1, vec![T(1), T(1)])], 0);
        let p = g.pruned();
        assert_eq!(p.rule_count(), 1);
        assert_eq!(p.size(), 1);
        assert_eq!(g.size(), 3);
    }

    #[test]
    fn renumbered_shifts_everything() {
        use Tok::*;
        let g = slp(&[(0, vec![N(1), T(5)]), (1, vec![T(0), T(1)])], 0);
        let r = g.renumbered(10);
        assert_eq!(r.start(), 10);
        assert_eq!(r.rhs(10).unwrap(), &[N(11), T(5)]);
        assert_eq!(r.rhs(11).unwrap(), &[T(0), T(1)]);
        assert_eq!(r.expand(100).unwrap().symbols(), g.expand(100).unwrap().symbols());
    }
}
