use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Subcommand, ValueEnum};
use rstkit_experiments::cohorts::GROWING_GENRES;
use rstkit_experiments::report::degradation_csv;
use rstkit_experiments::{
    build_all_large, build_baseline, build_fixed_cohorts, build_ova, degradation, run, CohortPlan, Corpora,
    ExperimentConfig, RunOptions, ScoreReport,
};

use crate::input::read_corpus;
use crate::{write_file, Cli, OutArg};

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[command(subcommand)]
    command: ExperimentCommand,
}

/// `name=dir`: a corpus directory with manifest.tsv, under the name configs
/// refer to.
#[derive(Clone, Debug)]
struct NamedCorpus {
    name: String,
    dir: PathBuf,
}

impl std::str::FromStr for NamedCorpus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.split_once('=') {
            Some((n, d)) if !n.is_empty() && !d.is_empty() => Ok(NamedCorpus {
                name: n.to_owned(),
                dir: d.into(),
            }),
            _ => Err(format!("expected NAME=DIR, got `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    /// In-domain training on all genres, tested per genre.
    Baseline,
    /// One held-out-genre experiment per large genre.
    Ova,
    /// Large genres only, tested on the growing ones.
    AllLarge,
    /// Fixed-size training cohorts.
    Cohorts,
}

#[derive(Debug, Subcommand)]
enum ExperimentCommand {
    /// Train and score every run of a config.
    Run {
        config: PathBuf,
        #[arg(long = "corpus", required = true)]
        corpora: Vec<NamedCorpus>,
        /// Models, parses and reports go to <out-dir>/<name>/.
        #[arg(long, default_value = "runs")]
        out_dir: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Write configs for a standard experiment family.
    Generate {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long)]
        corpus: NamedCorpus,
        /// Held-out genres for `ova`; defaults to every large genre present.
        #[arg(long, value_delimiter = ',')]
        genres: Vec<String>,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Per-target mean scores of a baseline against another report.
    Degradation {
        #[arg(long)]
        baseline: PathBuf,
        #[arg(long)]
        other: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
}

fn load_corpora(cli: &Cli, named: &[NamedCorpus]) -> Result<Corpora> {
    let mut out = Corpora::new();
    for c in named {
        let corpus = read_corpus(&c.dir, &cli.read_options(None))?;
        if out.insert(c.name.clone(), corpus).is_some() {
            bail!("corpus `{}` given twice", c.name);
        }
    }
    Ok(out)
}

fn read_report(path: &std::path::Path) -> Result<ScoreReport> {
    let content = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(ScoreReport::from_csv(&crate::input::stem(path), &content)?)
}

pub fn experiment(cli: &Cli, a: &ExperimentArgs, stdout: &mut dyn Write) -> Result<()> {
    match &a.command {
        ExperimentCommand::Run {
            config,
            corpora,
            out_dir,
            out,
        } => {
            let cfg = ExperimentConfig::read(config)?;
            let corpora = load_corpora(cli, corpora)?;
            let opts = RunOptions {
                out_dir: Some(out_dir.clone()),
                jobs: cli.jobs,
            };
            let report = run(&cfg, &corpora, &opts)?;
            out.emit(stdout, &report.to_csv()?)
        }
        ExperimentCommand::Generate {
            kind,
            corpus,
            genres,
            out_dir,
        } => {
            let c = read_corpus(&corpus.dir, &cli.read_options(None))?;
            let name = corpus.name.as_str();
            let configs = match kind {
                Kind::Baseline => vec![build_baseline(name, &c)],
                Kind::AllLarge => vec![build_all_large(name, &c)],
                Kind::Cohorts => build_fixed_cohorts(name, &c, &CohortPlan::default())?,
                Kind::Ova => {
                    let held: Vec<String> = if genres.is_empty() {
                        c.genres()
                            .into_iter()
                            .filter(|g| !GROWING_GENRES.contains(g))
                            .map(str::to_owned)
                            .collect()
                    } else {
                        genres.clone()
                    };
                    held.iter().map(|g| build_ova(name, &c, g)).collect::<Result<_, _>>()?
                }
            };
            for cfg in configs {
                let path = out_dir.join(format!("{}.toml", cfg.name));
                write_file(&path, &cfg.to_toml())?;
                writeln!(stdout, "{}", path.display())?;
            }
            Ok(())
        }
        ExperimentCommand::Degradation { baseline, other, out } => {
            let rows = degradation(&read_report(baseline)?, &read_report(other)?);
            if rows.is_empty() {
                bail!("the reports share no targets");
            }
            out.emit(stdout, &degradation_csv(&rows)?)
        }
    }
}
