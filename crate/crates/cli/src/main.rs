use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use bioclaim_core::corpus::{
    corpus_stats, filter_acquisition, length_class_crosstab, load_raw_dump, load_tweet_corpus,
    stratified_sample, write_raw_dump,
};
use bioclaim_core::eval::{annotation_agreement, AgreementLevel};
use bioclaim_core::harness::{run_cross_domain, run_grid, ExperimentConfig};
use bioclaim_core::preprocess::{preprocess, tokenize};

#[derive(Parser)]
#[command(
    name = "bioclaim",
    version,
    about = "Claim detection experiments on biomedical tweets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train and evaluate every configured (task, model) cell.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides `output_dir` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Binary LG across the tweet and essay domains.
    CrossDomain {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Class counts, lengths and per-topic claim rates of an annotated corpus.
    Stats {
        #[arg(long)]
        corpus: PathBuf,
        /// Also print the short/long by class crosstab at this token count.
        #[arg(long)]
        length_threshold: Option<usize>,
    },
    /// Cohen's kappa between two annotations of the same tweets.
    Agreement {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, value_enum)]
        level: Level,
    },
    /// Filter a raw dump and draw a stratified sample per topic and query category.
    Sample {
        #[arg(long)]
        raw: PathBuf,
        #[arg(long, default_value_t = 75)]
        per_cell: usize,
        #[arg(long)]
        seed: u64,
        /// Write the sample here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the tokens of each input line, tab-separated.
    Tokenize {
        #[arg(long = "in")]
        input: PathBuf,
        /// Keep mentions as they are.
        #[arg(long)]
        keep_mentions: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    Doc2,
    Doc3,
    Span,
}

impl From<Level> for AgreementLevel {
    fn from(l: Level) -> Self {
        match l {
            Level::Doc2 => AgreementLevel::Doc2,
            Level::Doc3 => AgreementLevel::Doc3,
            Level::Span => AgreementLevel::Span,
        }
    }
}

fn load_config(path: &Path, out: Option<PathBuf>) -> Result<(ExperimentConfig, PathBuf)> {
    let config = ExperimentConfig::from_file(path)?;
    let dir = out
        .or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    Ok((config, dir))
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let mut stdout = io::stdout().lock();

    match cli.command {
        Command::Run { config, out } => {
            let (config, dir) = load_config(&config, out)?;
            let report = run_grid(&config)?;
            report.write_to(&dir)?;
            write!(stdout, "{}", report.table())?;
            log::info!("wrote reports to {}", dir.display());
        }
        Command::CrossDomain { config, out } => {
            let (config, dir) = load_config(&config, out)?;
            let report = run_cross_domain(&config)?;
            report.write_to(&dir)?;
            write!(stdout, "{}", report.table())?;
        }
        Command::Stats {
            corpus,
            length_threshold,
        } => {
            let records = load_tweet_corpus(&corpus)?;
            let stats = corpus_stats(&records, preprocess)?;
            write!(stdout, "{}", stats.to_tsv())?;
            if let Some(t) = length_threshold {
                let x = length_class_crosstab(&records, t, preprocess);
                writeln!(stdout, "\nlength\tnon-claim\tclaim")?;
                writeln!(stdout, "<= {t}\t{}\t{}", x.short_non_claim, x.short_claim)?;
                writeln!(stdout, "> {t}\t{}\t{}", x.long_non_claim, x.long_claim)?;
            }
        }
        Command::Agreement { a, b, level } => {
            let ra = load_tweet_corpus(&a)?;
            let rb = load_tweet_corpus(&b)?;
            let r = annotation_agreement(&ra, &rb, level.into())?;
            writeln!(stdout, "kappa\tobserved\texpected\tn_items")?;
            writeln!(
                stdout,
                "{}\t{}\t{}\t{}",
                r.kappa, r.observed, r.expected, r.n_items
            )?;
        }
        Command::Sample {
            raw,
            per_cell,
            seed,
            out,
        } => {
            let dump = load_raw_dump(&raw)?;
            let n_raw = dump.len();
            let kept = filter_acquisition(dump);
            log::info!("{} of {n_raw} raw tweets pass the filters", kept.len());
            let sample = stratified_sample(&kept, per_cell, seed)?;
            let mut w = open_output(out.as_deref())?;
            write_raw_dump(&mut w, &sample)?;
            w.flush()?;
        }
        Command::Tokenize {
            input,
            keep_mentions,
        } => {
            let file =
                File::open(&input).with_context(|| format!("cannot open {}", input.display()))?;
            for line in BufReader::new(file).lines() {
                let line = line?;
                let tokens = if keep_mentions {
                    tokenize(&line)
                } else {
                    preprocess(&line)
                };
                writeln!(stdout, "{}", tokens.join("\t"))?;
            }
        }
    }
    stdout.flush()?;
    Ok(())
}
