use std::io::Write;
use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use rstkit::metrics::{aggregate, parseval, seg_counts, Averaging, ParsevalCounts, ParsevalOptions, SegCounts};
use rstkit::relmap::LabelMode;

use crate::input::{pair_up, read_binary, read_segmentations};
use crate::{csv_string, BranchingArg, Cli, OutArg};

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Gold .rs3 file or directory.
    #[arg(long)]
    gold: PathBuf,
    /// Predicted .rs3 file or directory.
    #[arg(long)]
    pred: PathBuf,
    /// `micro` pools all units; `macro` averages per-genre scores.
    #[arg(long, default_value = "micro")]
    mode: Averaging,
    /// Count the whole-document span as a unit.
    #[arg(long)]
    include_root: bool,
    /// Relation classes for R: `gum`, `rstdt`, or `fine` for verbatim labels.
    #[arg(long, default_value = "gum")]
    labels: LabelMode,
    #[arg(long, value_enum, default_value_t)]
    branching: BranchingArg,
    /// Genres for macro averaging; defaults to manifest.tsv in the gold directory.
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[command(flatten)]
    out: OutArg,
}

fn triple(c: &ParsevalCounts, s: rstkit::metrics::ScoreTriple) -> Vec<String> {
    vec![
        format!("{:.4}", s.s),
        format!("{:.4}", s.n),
        format!("{:.4}", s.r),
        c.matched_s.to_string(),
        c.matched_n.to_string(),
        c.matched_r.to_string(),
        c.gold_units.to_string(),
        c.pred_units.to_string(),
    ]
}

pub fn score(cli: &Cli, a: &ScoreArgs, stdout: &mut dyn Write) -> Result<()> {
    let gold = read_binary(&a.gold, &cli.read_options(a.manifest.as_deref()), a.branching.into())?;
    let pred = read_binary(&a.pred, &cli.read_options(None), a.branching.into())?;
    let opts = ParsevalOptions {
        include_root: a.include_root,
        labels: a.labels,
    };
    let mut per_doc = Vec::with_capacity(gold.len());
    for (g, p) in pair_up(&gold, &pred, |t| &t.doc_id, |t| &t.doc_id)? {
        per_doc.push((g.genre.as_str(), &g.doc_id, parseval(&g.root, &p.root, &opts)?));
    }
    let total = aggregate(per_doc.iter().map(|(g, _, c)| (*g, *c)), a.mode)?;
    let mut pooled = ParsevalCounts::default();
    let mut rows = Vec::new();
    for (genre, id, c) in &per_doc {
        pooled += *c;
        let mut r = vec![id.to_string(), genre.to_string()];
        r.extend(triple(c, c.scores()));
        rows.push(r);
    }
    let mode = match a.mode {
        Averaging::Micro => "micro",
        Averaging::MacroByGenre => "macro",
    };
    let mut last = vec![format!("all-{mode}"), String::new()];
    last.extend(triple(&pooled, total));
    rows.push(last);
    let header = [
        "doc_id",
        "genre",
        "S",
        "N",
        "R",
        "matched_s",
        "matched_n",
        "matched_r",
        "gold_units",
        "pred_units",
    ];
    a.out.emit(stdout, &csv_string(&header, rows)?)
}

#[derive(Debug, Args)]
pub struct SegScoreArgs {
    /// Gold segmentation: .rs3 files, or .edus files with one EDU per line.
    #[arg(long)]
    gold: PathBuf,
    #[arg(long)]
    pred: PathBuf,
    #[command(flatten)]
    out: OutArg,
}

pub fn seg_score(cli: &Cli, a: &SegScoreArgs, stdout: &mut dyn Write) -> Result<()> {
    let gold = read_segmentations(&a.gold, &cli.read_options(None))?;
    let pred = read_segmentations(&a.pred, &cli.read_options(None))?;
    let mut total = SegCounts::default();
    let mut rows = Vec::new();
    let row = |id: &str, c: &SegCounts| {
        let s = c.score();
        vec![
            id.to_owned(),
            c.matched.to_string(),
            c.gold.to_string(),
            c.pred.to_string(),
            format!("{:.4}", s.p),
            format!("{:.4}", s.r),
            format!("{:.4}", s.f1),
        ]
    };
    for (g, p) in pair_up(&gold, &pred, |d| &d.0, |d| &d.0)? {
        let c = seg_counts(&g.1, &p.1).map_err(|e| anyhow::anyhow!("`{}`: {e}", g.0))?;
        total += c;
        rows.push(row(&g.0, &c));
    }
    rows.push(row("all", &total));
    a.out.emit(
        stdout,
        &csv_string(&["doc_id", "matched", "gold", "pred", "P", "R", "F1"], rows)?,
    )
}
