#![allow(dead_code)]

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_assocnorms")
}

pub fn run<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(bin())
        .args(args)
        .output()
        .expect("spawn assocnorms")
}

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn p(path: &Path) -> String {
    path.display().to_string()
}

/// `--assoc/--resp/--ngrams/--thesaurus` for the twelve-pair reference fixture.
pub fn reference_args() -> Vec<String> {
    let mut v = Vec::new();
    for (flag, file) in [
        ("--assoc", "reference_assoc.tsv"),
        ("--resp", "reference_resp.tsv"),
        ("--ngrams", "reference_ngrams.tsv"),
        ("--thesaurus", "reference_thesaurus.tsv"),
    ] {
        v.push(flag.to_owned());
        v.push(p(&fixture(file)));
    }
    v
}

pub struct Corpus {
    pub assoc: PathBuf,
    pub resp: PathBuf,
}

/// Stimuli `a0..a5` and `b0..b5` draw responses from two disjoint pools;
/// the probe stimulus `probe` is answered from pool A by men and pool B by
/// women when `divergent`, and identically by both otherwise.
pub fn write_gender_corpus(dir: &Path, per_gender: usize, divergent: bool) -> Corpus {
    let mut assoc = String::new();
    let mut resp = String::new();
    for (g, tag) in [("m", "m"), ("f", "f")] {
        for k in 0..per_gender {
            let id = format!("{tag}{k:02}");
            writeln!(resp, "{id}\t{g}\tstaff\t{}\tcity", 20 + k).unwrap();
            for i in 0..6 {
                writeln!(assoc, "{id}\ta{i}\tra{}", (i + k) % 6).unwrap();
                writeln!(assoc, "{id}\tb{i}\trb{}", (i + k) % 6).unwrap();
            }
            let pool = if divergent && g == "f" { "rb" } else { "ra" };
            writeln!(assoc, "{id}\tprobe\t{pool}{}", k % 6).unwrap();
        }
    }
    let corpus = Corpus {
        assoc: dir.join("gender_assoc.tsv"),
        resp: dir.join("gender_resp.tsv"),
    };
    fs::write(&corpus.assoc, assoc).unwrap();
    fs::write(&corpus.resp, resp).unwrap();
    corpus
}

pub struct MatchCorpus {
    pub assoc: PathBuf,
    pub resp: PathBuf,
    pub ngrams: PathBuf,
}

/// Per-gender match behavior for the permutation-test command: `all` means
/// every response of that group is found in the ngram table.
pub fn write_match_corpus(
    dir: &Path,
    per_gender: usize,
    male_all: bool,
    female_all: bool,
    genders: &[&str],
) -> MatchCorpus {
    let mut assoc = String::new();
    let mut resp = String::new();
    for &g in genders {
        let all = if g == "m" { male_all } else { female_all };
        for k in 0..per_gender {
            let id = format!("{g}{k:02}");
            writeln!(resp, "{id}\t{g}").unwrap();
            for s in ["yellow", "morning", "write"] {
                let r = if all { hit(s) } else { "zzz" };
                writeln!(assoc, "{id}\t{s}\t{r}").unwrap();
            }
        }
    }
    let corpus = MatchCorpus {
        assoc: dir.join("match_assoc.tsv"),
        resp: dir.join("match_resp.tsv"),
        ngrams: dir.join("match_ngrams.tsv"),
    };
    fs::write(&corpus.assoc, assoc).unwrap();
    fs::write(&corpus.resp, resp).unwrap();
    fs::write(
        &corpus.ngrams,
        "yellow colour\t241\nmorning good\t445\nwrite letter\t218\n",
    )
    .unwrap();
    corpus
}

fn hit(stimulus: &str) -> &'static str {
    match stimulus {
        "yellow" => "colour",
        "morning" => "good",
        _ => "letter",
    }
}
