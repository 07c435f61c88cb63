//! Grid runner behind `gramlab experiment`: builds each (k, m) instance,
//! runs the selected compressors on it and assembles one CSV table. Grid
//! points are independent, so they are farmed out to a small thread pool.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use gramlab::compress::CompressorKind;
use gramlab::families::{self, FamilyInstance, FamilyKind};
use gramlab::ops::distinct_factor_lower_bound;
use gramlab::Error;

pub fn build_instance(
    family: FamilyKind,
    k: u64,
    m: Option<u64>,
    cap: u128,
) -> gramlab::Result<FamilyInstance> {
    match (family, m) {
        (FamilyKind::Bisection, None) => families::bisection_hard(k, cap),
        (FamilyKind::BisectionBinary, None) => families::bisection_hard_binary(k, cap),
        (FamilyKind::Lz78, Some(m)) => families::lz78_hard(m, k, cap),
        (FamilyKind::Repair, None) => families::repair_hard(k, cap),
        (FamilyKind::Incompressible, None) => families::incompressible_word(k, cap),
        (FamilyKind::Lz78, None) => Err(Error::Param("the lz78 family needs --m".into())),
        (_, Some(_)) => Err(Error::Param("--m only applies to the lz78 family".into())),
    }
}

struct Row {
    k: u64,
    m: Option<u64>,
    n: usize,
    compressor: &'static str,
    variant: &'static str,
    slp_size: usize,
    witness_size: usize,
    factor_lb: usize,
    ratio_vs_witness: f64,
    normalized: Option<f64>,
}

enum TaskOut {
    Rows(Vec<Row>),
    /// Marker line for an instance the length cap excluded.
    Truncated(String),
}

/// The family's proven growth order, used to normalize compressor output so
/// sizes at different n are comparable. None for the incompressible family,
/// where no growth law applies.
fn growth_law(family: FamilyKind, n: f64) -> Option<f64> {
    match family {
        FamilyKind::Bisection | FamilyKind::BisectionBinary => Some((n / n.log2()).sqrt()),
        FamilyKind::Lz78 => Some((n / n.log2()).powf(2.0 / 3.0)),
        FamilyKind::Repair => Some(n.log2() / n.log2().log2()),
        FamilyKind::Incompressible => None,
    }
}

fn run_task(
    family: FamilyKind,
    k: u64,
    m: Option<u64>,
    kinds: &[CompressorKind],
    cap: u128,
) -> gramlab::Result<TaskOut> {
    let inst = match build_instance(family, k, m, cap) {
        Ok(inst) => inst,
        Err(Error::CapExceeded { len, cap }) => {
            let m_part = m.map_or(String::new(), |m| format!(" m={m}"));
            return Ok(TaskOut::Truncated(format!(
                "# truncated: {} k={k}{m_part} needs length {len}, cap {cap}",
                family.name()
            )));
        }
        Err(e) => return Err(e),
    };
    let distinct = inst.word.symbols().iter().collect::<BTreeSet<_>>().len();
    let factor_lb = distinct_factor_lower_bound(&inst.word, 8).max(distinct);
    let n = inst.word.len();
    let witness_size = inst.witness.size();
    let mut rows = Vec::with_capacity(kinds.len());
    for kind in kinds {
        let g = kind.run(&inst.word)?;
        let slp_size = g.size();
        let ratio = slp_size as f64 / witness_size as f64;
        rows.push(Row {
            k,
            m,
            n,
            compressor: kind.name(),
            variant: kind.variant_name(),
            slp_size,
            witness_size,
            factor_lb,
            ratio_vs_witness: ratio,
            normalized: growth_law(family, n as f64).map(|law| slp_size as f64 / law),
        });
    }
    Ok(TaskOut::Rows(rows))
}

pub fn run(
    family: FamilyKind,
    ks: &[u64],
    ms: &[Option<u64>],
    kinds: &[CompressorKind],
    jobs: usize,
    cap: u128,
) -> anyhow::Result<String> {
    let mut tasks = Vec::new();
    for &k in ks {
        for &m in ms {
            tasks.push((k, m));
        }
    }
    let results = run_ordered(&tasks, jobs, |&(k, m)| run_task(family, k, m, kinds, cap));

    let mut rows = Vec::new();
    let mut markers = Vec::new();
    for out in results {
        match out? {
            TaskOut::Rows(mut r) => rows.append(&mut r),
            TaskOut::Truncated(line) => markers.push(line),
        }
    }
    rows.sort_by(|a, b| {
        (a.k, a.m, a.compressor, a.variant).cmp(&(b.k, b.m, b.compressor, b.variant))
    });

    let mut out =
        String::from("family,k,m,n,compressor,variant,slp_size,witness_size,factor_lb,ratio_vs_witness,normalized\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{:.6},{}\n",
            family.name(),
            r.k,
            r.m.map_or(String::new(), |m| m.to_string()),
            r.n,
            r.compressor,
            r.variant,
            r.slp_size,
            r.witness_size,
            r.factor_lb,
            r.ratio_vs_witness,
            r.normalized.map_or(String::new(), |v| format!("{v:.6}")),
        ));
    }
    for line in markers {
        out.push_str(&line);
        out.push('\n');
    }
    Ok(out)
}

/// Runs `f` over the tasks on up to `jobs` threads, handing back results in
/// task order.
fn run_ordered<T: Sync, R: Send>(
    tasks: &[T],
    jobs: usize,
    f: impl Fn(&T) -> R + Sync,
) -> Vec<R> {
    let jobs = jobs.max(1).min(tasks.len().max(1));
    let next = AtomicUsize::new(0);
    let done: Mutex<Vec<(usize, R)>> = Mutex::new(Vec::with_capacity(tasks.len()));
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= tasks.len() {
                    break;
                }
                let r = f(&tasks[i]);
                done.lock().unwrap().push((i, r));
            });
        }
    });
    let mut done = done.into_inner().unwrap();
    done.sort_by_key(|&(i, _)| i);
    done.into_iter().map(|(_, r)| r).collect()
}
