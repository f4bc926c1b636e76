//! Command-line front end. Every subcommand is a thin wrapper over the
//! library crates; results go to stdout or `--out`.

mod analyze;
mod corpus;
mod experiment;
pub mod input;
mod model;
mod score;

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use rstkit::Branching;

use crate::input::ReadOptions;

#[derive(Debug, Parser)]
#[command(
    name = "rstkit",
    version,
    about = "RST treebank scoring, conversion, parsing and experiments"
)]
pub struct Cli {
    /// Seed for every random choice (shuffling, tie-breaks).
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Documents (or runs) processed concurrently.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Drop empty segments in .rs3 input instead of rejecting the file.
    #[arg(long, global = true)]
    pub lenient: bool,
    /// More log output on stderr; repeat for more.
    #[arg(short, long, global = true, action = ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    pub fn log_level(&self) -> log::LevelFilter {
        match self.verbose {
            0 => log::LevelFilter::Warn,
            1 => log::LevelFilter::Info,
            _ => log::LevelFilter::Debug,
        }
    }

    fn read_options(&self, manifest: Option<&Path>) -> ReadOptions {
        ReadOptions {
            lenient: self.lenient,
            manifest: manifest.map(Path::to_path_buf),
            jobs: self.jobs,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rewrite .rs3 files canonically, optionally as strictly binary trees.
    Convert(corpus::ConvertArgs),
    /// Convert .rs3 constituent trees to .rsd dependencies.
    Depconvert(corpus::DepconvertArgs),
    /// Parseval S/N/R of predicted trees against gold, per document.
    Score(score::ScoreArgs),
    /// EDU boundary precision, recall and F1.
    SegScore(score::SegScoreArgs),
    /// Corpus size and nuclearity statistics.
    Stats(corpus::StatsArgs),
    /// Relation class mapping lookups.
    Map(corpus::MapArgs),
    /// Train a parser on a corpus.
    Train(model::TrainArgs),
    /// Parse documents with a trained model.
    Parse(model::ParseArgs),
    /// Run, generate or compare experiments.
    Experiment(experiment::ExperimentArgs),
    /// Error analysis over gold and predicted documents.
    Analyze(analyze::AnalyzeArgs),
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum BranchingArg {
    #[default]
    Right,
    Left,
}

impl From<BranchingArg> for Branching {
    fn from(b: BranchingArg) -> Self {
        match b {
            BranchingArg::Right => Branching::Right,
            BranchingArg::Left => Branching::Left,
        }
    }
}

/// Where a command's main output goes.
#[derive(Clone, Debug, Default, Args)]
pub struct OutArg {
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

impl OutArg {
    fn emit(&self, stdout: &mut dyn Write, content: &str) -> Result<()> {
        match &self.out {
            Some(p) => write_file(p, content),
            None => Ok(stdout.write_all(content.as_bytes())?),
        }
    }
}

pub(crate) fn write_file(path: &Path, content: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    std::fs::write(path, content).with_context(|| format!("writing {}", path.display()))
}

pub(crate) fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Convert(a) => corpus::convert(&cli, a, stdout),
        Command::Depconvert(a) => corpus::depconvert(&cli, a, stdout),
        Command::Score(a) => score::score(&cli, a, stdout),
        Command::SegScore(a) => score::seg_score(&cli, a, stdout),
        Command::Stats(a) => corpus::stats(&cli, a, stdout),
        Command::Map(a) => corpus::map(&cli, a, stdout),
        Command::Train(a) => model::train(&cli, a, stdout),
        Command::Parse(a) => model::parse(&cli, a, stdout),
        Command::Experiment(a) => experiment::experiment(&cli, a, stdout),
        Command::Analyze(a) => analyze::analyze(&cli, a, stdout),
    }
}
