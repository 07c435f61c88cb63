use std::path::Path;
use std::process::{Command, Output};

use gramlab::format::{parse_grammar, parse_words, WordFormat};
use gramlab::{Alphabet, Word};

fn gramlab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gramlab"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "command failed\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn compress_reports_size_and_writes_the_grammar() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("w.txt"), "ababbbaabbaaab\n").unwrap();
    let out = gramlab(
        dir.path(),
        &["compress", "w.txt", "--compressor", "bisection", "-o", "g.txt"],
    );
    let text = stdout(&out);
    assert!(text.contains("size 16"), "missing size line: {text}");
    assert!(text.contains("round-trip ok"), "missing round-trip line: {text}");

    let (g, remap) = parse_grammar(&std::fs::read_to_string(dir.path().join("g.txt")).unwrap()).unwrap();
    assert!(remap.is_empty());
    let w = Word::from_chars("ababbbaabbaaab", &Alphabet::ab()).unwrap();
    assert_eq!(g.expand(100).unwrap().symbols(), w.symbols());
}

#[test]
fn compress_rejects_multi_word_input() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("w.txt"), "ab\nba\n").unwrap();
    let out = gramlab(dir.path(), &["compress", "w.txt", "--compressor", "lz78"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("exactly one"));
}

#[test]
fn family_writes_word_witness_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let out = gramlab(
        dir.path(),
        &[
            "family", "bisection", "--k", "4", "--word", "w.txt", "--witness", "g.txt",
            "--stats", "s.csv",
        ],
    );
    stdout(&out);
    let (words, alphabet) =
        parse_words(&std::fs::read_to_string(dir.path().join("w.txt")).unwrap(), WordFormat::Char)
            .unwrap();
    assert_eq!(words.len(), 1);
    assert_eq!(words[0].len(), 48);
    assert_eq!(alphabet.len(), 3);

    let (g, _) = parse_grammar(&std::fs::read_to_string(dir.path().join("g.txt")).unwrap()).unwrap();
    assert_eq!(g.expand(100).unwrap().symbols(), words[0].symbols());

    let stats = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
    assert!(stats.starts_with("stat,value\n"));
    assert!(stats.contains("m_k,2\n"), "stats: {stats}");
}

#[test]
fn family_rejects_m_outside_lz78() {
    let dir = tempfile::tempdir().unwrap();
    let out = gramlab(dir.path(), &["family", "repair", "--k", "4", "--m", "2"]);
    assert!(!out.status.success());
    let out = gramlab(dir.path(), &["family", "lz78", "--k", "4"]);
    assert!(!out.status.success());
}

#[test]
fn experiment_rows_are_deterministic_across_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["experiment", "bisection", "--k", "4,2"];
    let serial = stdout(&gramlab(dir.path(), &{
        let mut a = base.to_vec();
        a.extend(["--jobs", "1"]);
        a
    }));
    let parallel = stdout(&gramlab(dir.path(), &{
        let mut a = base.to_vec();
        a.extend(["--jobs", "3"]);
        a
    }));
    assert_eq!(serial, parallel);

    let lines: Vec<&str> = serial.lines().collect();
    assert_eq!(
        lines[0],
        "family,k,m,n,compressor,variant,slp_size,witness_size,factor_lb,ratio_vs_witness,normalized"
    );
    // two k values, all three compressors, k ascending with compressors
    // alphabetical inside each k
    assert_eq!(lines.len(), 7);
    let key = |l: &str| {
        let f: Vec<&str> = l.split(',').collect();
        (f[1].parse::<u64>().unwrap(), f[4].to_string())
    };
    for pair in lines[1..].windows(2) {
        assert!(key(pair[0]) < key(pair[1]), "rows out of order:\n{serial}");
    }
    assert!(serial.contains("bisection,2,,8,repair,maximal,"), "table:\n{serial}");
}

#[test]
fn experiment_marks_truncated_instances_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = gramlab(
        dir.path(),
        &[
            "experiment", "repair", "--k", "2,16", "--compressors", "repair",
            "--length-cap", "100000", "--csv", "t.csv",
        ],
    );
    stdout(&out);
    let table = std::fs::read_to_string(dir.path().join("t.csv")).unwrap();
    assert!(table.contains("repair,2,,14,repair,maximal,"), "table:\n{table}");
    assert!(!table.contains("\nrepair,16"), "truncated row present:\n{table}");
    let marker = table.lines().last().unwrap();
    assert!(
        marker.starts_with("# truncated: repair k=16 needs length "),
        "marker: {marker}"
    );
    assert!(marker.ends_with(", cap 100000"), "marker: {marker}");
}

#[test]
fn oracle_emits_csv_json_and_witness() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("w.txt"), "aaaaaa\n").unwrap();
    let out = gramlab(
        dir.path(),
        &[
            "oracle", "w.txt", "--csv", "o.csv", "--json", "o.json", "--witness", "wit.txt",
        ],
    );
    stdout(&out);

    let csv = std::fs::read_to_string(dir.path().join("o.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "word,lower,upper,exact,witness");
    assert_eq!(csv.lines().nth(1).unwrap(), "aaaaaa,1,5,5,wit.txt");

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("o.json")).unwrap()).unwrap();
    assert_eq!(json[0]["word"], "aaaaaa");
    assert_eq!(json[0]["exact"], 5);

    let (g, _) =
        parse_grammar(&std::fs::read_to_string(dir.path().join("wit.txt")).unwrap()).unwrap();
    assert_eq!(g.size(), 5);
    assert_eq!(g.expand(100).unwrap().symbols(), &[0; 6]);
}

#[test]
fn oracle_handles_one_row_per_word() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("w.txt"), "ab\nabab\n").unwrap();
    let text = stdout(&gramlab(dir.path(), &["oracle", "w.txt"]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[1], "ab,2,2,2,");
    assert_eq!(lines[2], "abab,2,4,4,");
}

#[test]
fn verify_paper_passes_and_filters() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&gramlab(dir.path(), &["verify-paper"]));
    assert!(text.contains("\n19/19 checks passed"), "summary missing:\n{text}");
    assert!(!text.contains("FAIL"), "failures:\n{text}");

    let text = stdout(&gramlab(
        dir.path(),
        &["verify-paper", "--only", "bisection-fourteen", "--only", "oracle-tiny"],
    ));
    assert!(text.contains("PASS bisection-fourteen"));
    assert!(text.contains("PASS oracle-tiny"));
    assert!(text.contains("2/2 checks passed"));

    let out = gramlab(dir.path(), &["verify-paper", "--only", "no-such-check"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown check"));
}
