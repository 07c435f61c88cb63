mod checks;
mod experiment;

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gramlab::compress::{CompressorKind, RepairVariant};
use gramlab::families::FamilyKind;
use gramlab::format::{self, WordFormat};
use gramlab::oracle;
use gramlab::{Alphabet, Word};

#[derive(Parser)]
#[command(name = "gramlab", version, about = "Grammar-based compression laboratory")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compress one word with a chosen compressor and emit the grammar
    Compress(CompressArgs),
    /// Generate an adversarial family instance with its witness grammar
    Family(FamilyArgs),
    /// Run a compressor grid over family instances and tabulate sizes
    Experiment(ExperimentArgs),
    /// Bound the smallest grammar size for each input word
    Oracle(OracleArgs),
    /// Re-run the worked examples and published values as named checks
    #[command(name = "verify-paper")]
    VerifyPaper(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    /// one word per line, alphabet read off the file
    Char,
    /// integers separated by spaces, one word per line
    Int,
}

impl From<FormatArg> for WordFormat {
    fn from(f: FormatArg) -> WordFormat {
        match f {
            FormatArg::Char => WordFormat::Char,
            FormatArg::Int => WordFormat::Int,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Maximal,
    Digram,
}

impl From<VariantArg> for RepairVariant {
    fn from(v: VariantArg) -> RepairVariant {
        match v {
            VariantArg::Maximal => RepairVariant::MaximalString,
            VariantArg::Digram => RepairVariant::Digram,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Bisection,
    Lz78,
    Repair,
}

impl AlgoArg {
    fn kind(self, variant: VariantArg) -> CompressorKind {
        match self {
            AlgoArg::Bisection => CompressorKind::Bisection,
            AlgoArg::Lz78 => CompressorKind::Lz78,
            AlgoArg::Repair => CompressorKind::Repair(variant.into()),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Bisection,
    BisectionBinary,
    Lz78,
    Repair,
    Incompressible,
}

impl From<FamilyArg> for FamilyKind {
    fn from(f: FamilyArg) -> FamilyKind {
        match f {
            FamilyArg::Bisection => FamilyKind::Bisection,
            FamilyArg::BisectionBinary => FamilyKind::BisectionBinary,
            FamilyArg::Lz78 => FamilyKind::Lz78,
            FamilyArg::Repair => FamilyKind::Repair,
            FamilyArg::Incompressible => FamilyKind::Incompressible,
        }
    }
}

#[derive(Args)]
struct CompressArgs {
    /// Word file holding exactly one word
    input: PathBuf,
    #[arg(long, value_enum)]
    compressor: AlgoArg,
    /// RePair flavour; ignored by the other compressors
    #[arg(long, value_enum, default_value = "maximal")]
    variant: VariantArg,
    #[arg(long, value_enum, default_value = "char")]
    format: FormatArg,
    /// Write the grammar here instead of printing it
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct FamilyArgs {
    family: FamilyArg,
    #[arg(long)]
    k: u64,
    /// Second parameter, used by the lz78 family only
    #[arg(long)]
    m: Option<u64>,
    /// Refuse instances whose word would be longer than this
    #[arg(long, default_value_t = 100_000_000)]
    length_cap: u64,
    #[arg(long, value_enum, default_value = "char")]
    format: FormatArg,
    /// Write the family word here
    #[arg(long)]
    word: Option<PathBuf>,
    /// Write the witness grammar here
    #[arg(long)]
    witness: Option<PathBuf>,
    /// Write the stats table here (stdout when omitted)
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    family: FamilyArg,
    /// Grid of k values
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<u64>,
    /// Grid of m values, lz78 family only
    #[arg(long, value_delimiter = ',')]
    m: Vec<u64>,
    /// Compressors to run (all three when omitted)
    #[arg(long, value_delimiter = ',', value_enum)]
    compressors: Vec<AlgoArg>,
    /// RePair flavour for the repair compressor
    #[arg(long, value_enum, default_value = "maximal")]
    variant: VariantArg,
    /// Write the result table here (stdout when omitted)
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Worker threads for independent grid points
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Skip instances whose word would be longer than this
    #[arg(long, default_value_t = 100_000_000)]
    length_cap: u64,
}

#[derive(Args)]
struct OracleArgs {
    /// Word file; each word gets one result row
    input: PathBuf,
    #[arg(long, value_enum, default_value = "char")]
    format: FormatArg,
    /// Write the result table here (stdout when neither --csv nor --json is given)
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write the results as a JSON array here
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the upper-bound witness grammar here (single-word inputs only)
    #[arg(long)]
    witness: Option<PathBuf>,
    /// Abort the exact search after examining this many candidate subsets
    #[arg(long, default_value_t = oracle::DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run only the named checks (repeatable)
    #[arg(long)]
    only: Vec<String>,
}

fn main() -> Result<()> {
    match Cli::parse().cmd {
        Cmd::Compress(args) => run_compress(args),
        Cmd::Family(args) => run_family(args),
        Cmd::Experiment(args) => run_experiment(args),
        Cmd::Oracle(args) => run_oracle(args),
        Cmd::VerifyPaper(args) => run_verify(args),
    }
}

fn read_words(path: &PathBuf, format: FormatArg) -> Result<(Vec<Word>, Alphabet)> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(format::parse_words(&text, format.into())?)
}

fn run_compress(args: CompressArgs) -> Result<()> {
    let (words, _) = read_words(&args.input, args.format)?;
    ensure!(
        words.len() == 1,
        "{} holds {} words; compress takes exactly one",
        args.input.display(),
        words.len()
    );
    let w = &words[0];
    let g = args.compressor.kind(args.variant).run(w)?;
    let expanded = g.expand(w.len() as u128)?;
    ensure!(
        expanded.symbols() == w.symbols(),
        "grammar does not derive the input word"
    );
    println!("size {}", g.size());
    println!("round-trip ok");
    let text = format::write_grammar(&g, &[])?;
    match &args.output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run_family(args: FamilyArgs) -> Result<()> {
    let inst =
        experiment::build_instance(args.family.into(), args.k, args.m, args.length_cap as u128)?;
    if let Some(p) = &args.word {
        let text = format::write_words(
            std::slice::from_ref(&inst.word),
            args.format.into(),
            &inst.alphabet,
        )?;
        fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
    }
    if let Some(p) = &args.witness {
        let text = format::write_grammar(&inst.witness, &[])?;
        fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
    }
    match &args.stats {
        Some(p) => fs::write(p, inst.stats_csv())
            .with_context(|| format!("writing {}", p.display()))?,
        None => print!("{}", inst.stats_csv()),
    }
    Ok(())
}

fn run_experiment(args: ExperimentArgs) -> Result<()> {
    let family: FamilyKind = args.family.into();
    let mut ks = args.k.clone();
    ks.sort_unstable();
    ks.dedup();
    let ms: Vec<Option<u64>> = if family == FamilyKind::Lz78 {
        ensure!(!args.m.is_empty(), "the lz78 family needs --m");
        let mut ms = args.m.clone();
        ms.sort_unstable();
        ms.dedup();
        ms.into_iter().map(Some).collect()
    } else {
        ensure!(args.m.is_empty(), "--m only applies to the lz78 family");
        vec![None]
    };
    let selected = if args.compressors.is_empty() {
        vec![AlgoArg::Bisection, AlgoArg::Lz78, AlgoArg::Repair]
    } else {
        args.compressors.clone()
    };
    // canonical column order regardless of how the flags were spelled
    let kinds: Vec<CompressorKind> = [AlgoArg::Bisection, AlgoArg::Lz78, AlgoArg::Repair]
        .into_iter()
        .filter(|a| selected.contains(a))
        .map(|a| a.kind(args.variant))
        .collect();
    let table = experiment::run(family, &ks, &ms, &kinds, args.jobs, args.length_cap as u128)?;
    match &args.csv {
        Some(p) => fs::write(p, table).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{table}"),
    }
    Ok(())
}

fn run_oracle(args: OracleArgs) -> Result<()> {
    let (words, alphabet) = read_words(&args.input, args.format)?;
    ensure!(!words.is_empty(), "{} holds no words", args.input.display());
    if args.witness.is_some() && words.len() != 1 {
        bail!(
            "--witness needs a single-word input; {} holds {}",
            args.input.display(),
            words.len()
        );
    }
    let mut csv = String::from("word,lower,upper,exact,witness\n");
    let mut json_rows = Vec::new();
    for w in &words {
        let b = oracle::g_bounds(w, &CompressorKind::ALL, None, Some(args.budget))?;
        let rendered = match args.format {
            FormatArg::Char => w.render(&alphabet)?,
            FormatArg::Int => w
                .symbols()
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" "),
        };
        let witness_path = match &args.witness {
            Some(p) => {
                let text = format::write_grammar(&b.upper_witness, &[])?;
                fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
                Some(p.display().to_string())
            }
            None => None,
        };
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            rendered,
            b.lower,
            b.upper,
            b.exact.map_or(String::new(), |g| g.to_string()),
            witness_path.clone().unwrap_or_default()
        ));
        json_rows.push(serde_json::json!({
            "word": rendered,
            "lower": b.lower,
            "upper": b.upper,
            "exact": b.exact,
            "witness": witness_path,
        }));
    }
    if let Some(p) = &args.csv {
        fs::write(p, &csv).with_context(|| format!("writing {}", p.display()))?;
    }
    if let Some(p) = &args.json {
        let text = serde_json::to_string_pretty(&serde_json::Value::Array(json_rows))?;
        fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display()))?;
    }
    if args.csv.is_none() && args.json.is_none() {
        print!("{csv}");
    }
    Ok(())
}

fn run_verify(args: VerifyArgs) -> Result<()> {
    let all = checks::all();
    let selected: Vec<&checks::Check> = if args.only.is_empty() {
        all.iter().collect()
    } else {
        for name in &args.only {
            if !all.iter().any(|c| c.name == name) {
                bail!(
                    "unknown check {name:?}; known checks:\n  {}",
                    all.iter().map(|c| c.name).collect::<Vec<_>>().join("\n  ")
                );
            }
        }
        all.iter().filter(|c| args.only.iter().any(|n| n == c.name)).collect()
    };
    let mut failed = 0usize;
    for check in &selected {
        match (check.run)() {
            Ok(()) => println!("PASS {}", check.name),
            Err(msg) => {
                failed += 1;
                println!("FAIL {}: {msg}", check.name);
            }
        }
    }
    println!("{}/{} checks passed", selected.len() - failed, selected.len());
    if failed > 0 {
        bail!("{failed} of {} checks failed", selected.len());
    }
    Ok(())
}
