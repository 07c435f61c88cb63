use std::cmp::Reverse;
use std::collections::{BinaryHeap, BTreeMap, HashMap};

use crate::slp::{Slp, Tok};
use crate::word::{Alphabet, Word};
use crate::{Error, Result};

use super::render_toks;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepairVariant {
    /// Replace the most frequent maximal string each round; ties go to the
    /// longer string, then to the earlier first occurrence.
    MaximalString,
    /// Classic variant: replace the most frequent digram, ties to the
    /// earlier first occurrence.
    Digram,
}

/// One replacement round: the string that was replaced (over the tokens of
/// the grammar at the start of the round), its non-overlapping occurrence
/// count, the nonterminal introduced for it, and the grammar size afterwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairRound {
    pub selected: Vec<Tok>,
    pub count: usize,
    pub fresh_nt: u32,
    pub size_after: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RepairTrace {
    pub rounds: Vec<RepairRound>,
}

/// Serializes a trace as CSV with columns round,string,count,size.
pub fn repair_trace_csv(trace: &RepairTrace, alphabet: &Alphabet) -> String {
    let mut out = String::from("round,string,count,size\n");
    for (i, r) in trace.rounds.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            i + 1,
            render_toks(&r.selected, alphabet),
            r.count,
            r.size_after
        ));
    }
    out
}

// Working tokens are packed into u32: terminals as their symbol id,
// nonterminals with the high bit set.
const NT_BIT: u32 = 1 << 31;

#[derive(Debug, Clone, Copy)]
struct Win {
    rule: u32,
    off: u32,
    count: u32,
    first: u64,
    last: u64,
}

/// Runs RePair on `w`: starts from the single rule start -> w and repeatedly
/// replaces the selected string by a fresh nonterminal until nothing occurs
/// twice without overlap. Occurrences are counted greedily left to right in
/// topological rule order; occurrences never span two right-hand sides.
/// Each round shrinks or preserves the total size.
pub fn repair(w: &Word, variant: RepairVariant) -> Result<(Slp, RepairTrace)> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mut rules: Vec<Vec<u32>> = vec![w.symbols().to_vec()];
    let mut rounds: Vec<RepairRound> = Vec::new();
    loop {
        let order = topo_order_packed(&rules);
        let bases = rule_bases(&rules, &order);
        let digrams = window_groups(&rules, &order, &bases, 2);
        let Some((count, mut best)) = most_frequent(&digrams) else {
            break;
        };
        let mut len = 2usize;
        if variant == RepairVariant::MaximalString {
            // grow while some longer string still reaches the same count;
            // counts cannot increase with length, so this finds the longest
            // most frequent string, earliest first occurrence on ties
            loop {
                let wider = window_groups(&rules, &order, &bases, len + 1);
                match earliest_with_count(&wider, count) {
                    Some(w) => {
                        best = w;
                        len += 1;
                    }
                    None => break,
                }
            }
        }
        let gamma: Vec<u32> =
            rules[best.rule as usize][best.off as usize..best.off as usize + len].to_vec();
        let fresh_id = rules.len() as u32;
        let fresh_tok = fresh_id | NT_BIT;
        let mut replaced = 0usize;
        for &rid in &order {
            let rewritten = {
                let rhs = &rules[rid as usize];
                if rhs.len() < len || !rhs.windows(len).any(|win| win == gamma) {
                    None
                } else {
                    let mut out = Vec::with_capacity(rhs.len());
                    let mut i = 0;
                    while i < rhs.len() {
                        if i + len <= rhs.len() && rhs[i..i + len] == gamma[..] {
                            out.push(fresh_tok);
                            i += len;
                            replaced += 1;
                        } else {
                            out.push(rhs[i]);
                            i += 1;
                        }
                    }
                    Some(out)
                }
            };
            if let Some(out) = rewritten {
                rules[rid as usize] = out;
            }
        }
        debug_assert_eq!(replaced, count as usize);
        rules.push(gamma.clone());
        let size_after: usize = rules.iter().map(Vec::len).sum();
        rounds.push(RepairRound {
            selected: gamma.iter().map(|&t| unpack(t)).collect(),
            count: count as usize,
            fresh_nt: fresh_id,
            size_after,
        });
    }
    let slp = Slp::new(
        rules
            .into_iter()
            .enumerate()
            .map(|(i, rhs)| (i as u32, rhs.iter().map(|&t| unpack(t)).collect()))
            .collect::<BTreeMap<u32, Vec<Tok>>>(),
        0,
    );
    Ok((slp, RepairTrace { rounds }))
}

/// Enumerates every maximal string of a grammar: length at least two, at
/// least two non-overlapping occurrences in the right-hand sides, and no
/// strictly longer string occurring at least as often. Returned in selection
/// priority order (count, then length, then first occurrence). Meant for
/// inspection and testing on small grammars; it materializes occurrence
/// groups for every window length.
pub fn maximal_strings(slp: &Slp) -> Vec<(Vec<Tok>, usize)> {
    let (rules, ids) = pack(slp);
    let order = topo_order_packed(&rules);
    let bases = rule_bases(&rules, &order);
    let mut per_len: Vec<Vec<Win>> = Vec::new();
    let mut len = 2usize;
    loop {
        let groups = window_groups(&rules, &order, &bases, len);
        let lmax = groups.iter().map(|g| g.count).max().unwrap_or(0);
        if lmax < 2 {
            break;
        }
        per_len.push(groups.into_iter().filter(|g| g.count >= 2).collect());
        len += 1;
    }
    let level_max: Vec<u32> = per_len
        .iter()
        .map(|gs| gs.iter().map(|g| g.count).max().unwrap())
        .collect();
    let mut picked: Vec<(Win, usize)> = Vec::new();
    for (li, gs) in per_len.iter().enumerate() {
        let longer = level_max[li + 1..].iter().copied().max().unwrap_or(0);
        for g in gs {
            if g.count > longer {
                picked.push((*g, li + 2));
            }
        }
    }
    picked.sort_by(|(a, alen), (b, blen)| {
        b.count
            .cmp(&a.count)
            .then(blen.cmp(alen))
            .then(a.first.cmp(&b.first))
    });
    picked
        .into_iter()
        .map(|(g, len)| {
            let content = &rules[g.rule as usize][g.off as usize..g.off as usize + len];
            let toks = content
                .iter()
                .map(|&t| {
                    if t & NT_BIT != 0 {
                        Tok::N(ids[(t & !NT_BIT) as usize])
                    } else {
                        Tok::T(t)
                    }
                })
                .collect();
            (toks, g.count as usize)
        })
        .collect()
}

fn unpack(t: u32) -> Tok {
    if t & NT_BIT != 0 {
        Tok::N(t & !NT_BIT)
    } else {
        Tok::T(t)
    }
}

/// Rules as dense packed vectors (index = position in ascending id order)
/// plus the original id of each index.
fn pack(slp: &Slp) -> (Vec<Vec<u32>>, Vec<u32>) {
    let ids: Vec<u32> = slp.rules().map(|(id, _)| id).collect();
    let idx_of: HashMap<u32, u32> = ids.iter().enumerate().map(|(i, &id)| (id, i as u32)).collect();
    let rules = slp
        .rules()
        .map(|(_, rhs)| {
            rhs.iter()
                .map(|tok| match tok {
                    Tok::T(s) => {
                        debug_assert!(*s < NT_BIT);
                        *s
                    }
                    Tok::N(m) => idx_of[m] | NT_BIT,
                })
                .collect()
        })
        .collect();
    (rules, ids)
}

/// Kahn's algorithm, always emitting the smallest ready rule id, so rules
/// appear after everything they reference.
fn topo_order_packed(rules: &[Vec<u32>]) -> Vec<u32> {
    let n = rules.len();
    let mut deps = vec![0u32; n];
    let mut dependents: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (i, rhs) in rules.iter().enumerate() {
        for &t in rhs {
            if t & NT_BIT != 0 {
                deps[i] += 1;
                dependents[(t & !NT_BIT) as usize].push(i as u32);
            }
        }
    }
    let mut ready: BinaryHeap<Reverse<u32>> = (0..n as u32)
        .filter(|&i| deps[i as usize] == 0)
        .map(Reverse)
        .collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(i)) = ready.pop() {
        order.push(i);
        for &d in &dependents[i as usize] {
            deps[d as usize] -= 1;
            if deps[d as usize] == 0 {
                ready.push(Reverse(d));
            }
        }
    }
    debug_assert_eq!(order.len(), n);
    order
}

/// Virtual start position of each rule in scan order. Consecutive rules are
/// separated by one unused slot so occurrences in different rules can never
/// be adjacent, which keeps the greedy gap test uniform.
fn rule_bases(rules: &[Vec<u32>], order: &[u32]) -> Vec<u64> {
    let mut bases = Vec::with_capacity(order.len());
    let mut pos = 0u64;
    for &rid in order {
        bases.push(pos);
        pos += rules[rid as usize].len() as u64 + 1;
    }
    bases
}

/// Groups all length-`len` windows by content and counts non-overlapping
/// occurrences greedily left to right in scan order. Grouping hashes a
/// fingerprint but always confirms by comparing against the group's
/// representative window, so equal counts are exact.
fn window_groups(rules: &[Vec<u32>], order: &[u32], bases: &[u64], len: usize) -> Vec<Win> {
    const BASE: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut groups: Vec<Win> = Vec::new();
    let mut index: HashMap<u64, Vec<u32>> = HashMap::new();
    for (oi, &rid) in order.iter().enumerate() {
        let rhs = &rules[rid as usize];
        if rhs.len() < len {
            continue;
        }
        let base = bases[oi];
        for off in 0..=(rhs.len() - len) {
            let win = &rhs[off..off + len];
            let mut fp = 0u64;
            for &t in win {
                fp = fp.wrapping_mul(BASE).wrapping_add(t as u64 + 1);
            }
            let pos = base + off as u64;
            let bucket = index.entry(fp).or_default();
            let mut found = None;
            for &gi in bucket.iter() {
                let g = &groups[gi as usize];
                let rep = &rules[g.rule as usize][g.off as usize..g.off as usize + len];
                if rep == win {
                    found = Some(gi as usize);
                    break;
                }
            }
            match found {
                Some(gi) => {
                    let g = &mut groups[gi];
                    if pos >= g.last + len as u64 {
                        g.count += 1;
                        g.last = pos;
                    }
                }
                None => {
                    bucket.push(groups.len() as u32);
                    groups.push(Win {
                        rule: rid,
                        off: off as u32,
                        count: 1,
                        first: pos,
                        last: pos,
                    });
                }
            }
        }
    }
    groups
}

/// Highest count at least two, earliest first occurrence on ties. Groups are
/// created in first-occurrence order, so the first strict maximum wins.
fn most_frequent(groups: &[Win]) -> Option<(u32, Win)> {
    let mut out: Option<(u32, Win)> = None;
    for g in groups {
        if g.count >= 2 && out.map_or(true, |(c, _)| g.count > c) {
            out = Some((g.count, *g));
        }
    }
    out
}

fn earliest_with_count(groups: &[Win], count: u32) -> Option<Win> {
    debug_assert!(groups.iter().all(|g| g.count <= count));
    groups.iter().find(|g| g.count == count).copied()
}
