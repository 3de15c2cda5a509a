use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod failure;
mod inputs;
mod output;

use failure::Failure;

/// Word-association norms: syntagmatic and paradigmatic scoring,
/// demographic contrasts and personalized association spaces.
#[derive(Parser, Debug)]
#[command(name = "assocnorms", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ngram match rate, log-frequency score and relation profile.
    Score(ScoreArgs),
    /// Permutation test on per-respondent match rate between the two largest groups.
    Test(TestArgs),
    /// Build the baseline model and one model per attribute value.
    Embed(EmbedArgs),
    /// Side-by-side nearest neighbors of a query across models.
    Nn(NnArgs),
    /// Dataset summary: counts, top responses, respondents per attribute.
    Report(ReportArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Associations TSV: respondent_id, stimulus, response.
    #[arg(long)]
    pub assoc: PathBuf,
    /// Respondents TSV: id, gender, specialization, age, location.
    #[arg(long)]
    pub resp: Option<PathBuf>,
    /// Ngram frequency TSV: tokens..., count.
    #[arg(long)]
    pub ngrams: Option<PathBuf>,
    /// Lemma dictionary TSV: surface, lemma.
    #[arg(long)]
    pub lemmas: Option<PathBuf>,
    /// Thesaurus TSV: word_a, word_b, relation.
    #[arg(long)]
    pub thesaurus: Option<PathBuf>,
    /// Respondent filter, e.g. `gender=f,specialization=chemistry,age=18-26`.
    #[arg(long)]
    pub filter: Option<String>,
    /// Output directory, created if absent.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Keep tokens as written instead of lowercasing and NFC-normalizing.
    #[arg(long)]
    pub no_normalize: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Args, Debug)]
pub struct ScoreArgs {
    #[command(flatten)]
    pub common: Common,
    /// Add per-slice rows for each value of this attribute.
    #[arg(long)]
    pub by: Option<String>,
}

#[derive(Args, Debug)]
pub struct TestArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value = "gender")]
    pub by: String,
    #[arg(long, default_value_t = 10_000)]
    pub iters: u64,
}

#[derive(Args, Debug)]
pub struct EmbedArgs {
    #[command(flatten)]
    pub common: Common,
    /// Build one model per value of this attribute besides the baseline.
    #[arg(long)]
    pub by: Option<String>,
    #[arg(long, default_value_t = 100)]
    pub dim: usize,
    #[arg(long, default_value_t = 0.75)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub shift: f64,
    #[arg(long, default_value_t = 0.5)]
    pub eig_weight: f64,
    #[arg(long, default_value_t = 5)]
    pub threshold: u64,
    /// `symmetric` or `directional`.
    #[arg(long, default_value = "symmetric")]
    pub mode: String,
}

#[derive(Args, Debug)]
pub struct NnArgs {
    /// Model file; repeat for side-by-side columns.
    #[arg(long = "model", required = true)]
    pub models: Vec<PathBuf>,
    #[arg(long)]
    pub query: String,
    #[arg(short = 'n', long, default_value_t = 10)]
    pub n: usize,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    #[command(flatten)]
    pub common: Common,
    /// Number of most frequent responses to list.
    #[arg(long, default_value_t = 10)]
    pub top: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: Result<(), Failure> = match cli.command {
        Command::Score(a) => commands::score(&a),
        Command::Test(a) => commands::test(&a),
        Command::Embed(a) => commands::embed(&a),
        Command::Nn(a) => commands::nn(&a),
        Command::Report(a) => commands::report(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
