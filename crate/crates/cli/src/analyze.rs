use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Subcommand};
use rstkit::analysis::{
    branching_report, cdu_accuracy, chi2_residuals, confusion, error_table, per_class_accuracy, AttachmentFilter,
    ErrorCount,
};
use rstkit::relmap::LabelMode;
use rstkit::treebank::DepDocument;

use crate::input::{genres, pair_up, read_binary, read_deps};
use crate::{csv_string, write_file, BranchingArg, Cli, OutArg};

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(subcommand)]
    command: AnalyzeCommand,
}

#[derive(Debug, Args)]
struct Pair {
    /// Gold .rsd or .rs3 file or directory.
    #[arg(long)]
    gold: PathBuf,
    #[arg(long)]
    pred: PathBuf,
    /// Relation classes: `gum`, `rstdt` or `fine`.
    #[arg(long, default_value = "gum")]
    scheme: LabelMode,
    /// Genres; defaults to manifest.tsv in the gold directory.
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Debug, Subcommand)]
enum AnalyzeCommand {
    /// Gold by predicted relation class counts.
    Confusion {
        #[command(flatten)]
        pair: Pair,
        /// `correct` keeps only EDUs attached to the gold head; `all` keeps every EDU.
        #[arg(long, default_value = "correct")]
        filter: AttachmentFilter,
        /// Also write heatmap data (labels and values) as JSON.
        #[arg(long)]
        heatmap: Option<PathBuf>,
    },
    /// Pearson residuals of the genre by class error table.
    Residuals {
        #[command(flatten)]
        pair: Pair,
        /// `misclassified` counts errors only; `all` counts every instance.
        #[arg(long, default_value = "misclassified")]
        count: ErrorCount,
    },
    /// Share of documents whose central unit is found.
    Cdu {
        #[command(flatten)]
        pair: Pair,
    },
    /// Per-class share of instances with correct head and class.
    Accuracy {
        #[command(flatten)]
        pair: Pair,
    },
    /// Span-and-nuclearity F1 per NS, SN and NN category (.rs3 input).
    Branching {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        include_root: bool,
        #[arg(long, value_enum, default_value_t)]
        branching: BranchingArg,
    },
}

/// Gold and predicted documents aligned by id.
fn deps(cli: &Cli, p: &Pair) -> Result<(Vec<DepDocument>, Vec<DepDocument>)> {
    let gold = read_deps(&p.gold, &cli.read_options(p.manifest.as_deref()))?;
    let pred = read_deps(&p.pred, &cli.read_options(None))?;
    let pairs = pair_up(&gold, &pred, |d| &d.doc_id, |d| &d.doc_id)?;
    let pred = pairs.iter().map(|(_, p)| (*p).clone()).collect();
    Ok((gold, pred))
}

pub fn analyze(cli: &Cli, a: &AnalyzeArgs, stdout: &mut dyn Write) -> Result<()> {
    match &a.command {
        AnalyzeCommand::Confusion { pair, filter, heatmap } => {
            let (g, p) = deps(cli, pair)?;
            let m = confusion(&g, &p, pair.scheme, *filter)?;
            if let Some(h) = heatmap {
                write_file(h, &m.to_heatmap_json())?;
            }
            pair.out.emit(stdout, &m.to_csv())
        }
        AnalyzeCommand::Residuals { pair, count } => {
            let (g, p) = deps(cli, pair)?;
            let genre_of = genres(&pair.gold, &cli.read_options(pair.manifest.as_deref()))?;
            if genre_of.is_empty() {
                bail!("residuals need genres: pass --manifest");
            }
            let mut triples = Vec::with_capacity(g.len());
            for (gd, pd) in g.iter().zip(&p) {
                match genre_of.get(&gd.doc_id) {
                    Some(genre) => triples.push((genre.as_str(), gd, pd)),
                    None => bail!("document `{}` is not in the manifest", gd.doc_id),
                }
            }
            let table = error_table(triples, pair.scheme, *count)?;
            pair.out.emit(stdout, &chi2_residuals(&table)?.to_csv())
        }
        AnalyzeCommand::Cdu { pair } => {
            let (g, p) = deps(cli, pair)?;
            let acc = cdu_accuracy(&g, &p)?;
            pair.out.emit(
                stdout,
                &csv_string(
                    &["documents", "cdu_accuracy"],
                    [vec![g.len().to_string(), format!("{acc:.4}")]],
                )?,
            )
        }
        AnalyzeCommand::Accuracy { pair } => {
            let (g, p) = deps(cli, pair)?;
            let rows = per_class_accuracy(&g, &p, pair.scheme)?
                .into_iter()
                .map(|(c, v)| vec![c, format!("{v:.4}")]);
            pair.out.emit(stdout, &csv_string(&["class", "accuracy"], rows)?)
        }
        AnalyzeCommand::Branching {
            pair,
            include_root,
            branching,
        } => {
            let gold = read_binary(
                &pair.gold,
                &cli.read_options(pair.manifest.as_deref()),
                (*branching).into(),
            )?;
            let pred = read_binary(&pair.pred, &cli.read_options(None), (*branching).into())?;
            let pairs = pair_up(&gold, &pred, |t| &t.doc_id, |t| &t.doc_id)?;
            let report = branching_report(pairs.iter().map(|(g, p)| (&g.root, &p.root)), *include_root)?;
            let rows = report.into_iter().map(|(cat, s)| {
                vec![
                    cat.to_string(),
                    s.gold.to_string(),
                    s.pred.to_string(),
                    s.matched.to_string(),
                    format!("{:.4}", s.f1),
                ]
            });
            pair.out.emit(
                stdout,
                &csv_string(&["category", "gold", "pred", "matched", "F1"], rows)?,
            )
        }
    }
}
