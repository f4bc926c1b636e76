use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use clap::{Args, Subcommand};
use rstkit::depconv::to_dependencies;
use rstkit::relmap::{RelationMap, Scheme};
use rstkit::stats::{corpus_stats, nuclearity_distribution, CorpusStats};
use rstkit::treebank::{write_rs3, write_rsd, Partition};
use rstkit::{binarize_with, debinarize, ConstituentTree};

use crate::input::{read_corpus, read_trees};
use crate::{csv_string, write_file, BranchingArg, Cli, OutArg};

/// Output for per-document conversions: one file per document in `out_dir`,
/// or stdout for a single document.
fn write_docs(out_dir: Option<&Path>, ext: &str, docs: Vec<(String, String)>, stdout: &mut dyn Write) -> Result<()> {
    match out_dir {
        Some(dir) => {
            for (id, content) in docs {
                write_file(&dir.join(format!("{id}.{ext}")), &content)?;
            }
            Ok(())
        }
        None if docs.len() == 1 => Ok(stdout.write_all(docs[0].1.as_bytes())?),
        None => bail!("{} documents: pass --out-dir", docs.len()),
    }
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    /// .rs3 file or directory.
    input: PathBuf,
    /// Directory for the rewritten files; stdout when converting one file.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Write the binarized tree instead of the original n-ary one.
    #[arg(long)]
    binary: bool,
    #[arg(long, value_enum, default_value_t)]
    branching: BranchingArg,
}

pub fn convert(cli: &Cli, a: &ConvertArgs, stdout: &mut dyn Write) -> Result<()> {
    let trees = read_trees(&a.input, &cli.read_options(None))?;
    let mut docs = Vec::with_capacity(trees.len());
    for t in &trees {
        let content = if a.binary {
            write_rs3(&debinarize(&binarize_with(t, a.branching.into()))?)
        } else {
            write_rs3(t)
        };
        docs.push((t.doc_id.clone(), content));
    }
    write_docs(a.out_dir.as_deref(), "rs3", docs, stdout)
}

#[derive(Debug, Args)]
pub struct DepconvertArgs {
    /// .rs3 file or directory.
    input: PathBuf,
    /// Directory for the .rsd files; stdout when converting one file.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    branching: BranchingArg,
}

pub fn depconvert(cli: &Cli, a: &DepconvertArgs, stdout: &mut dyn Write) -> Result<()> {
    let trees = read_trees(&a.input, &cli.read_options(None))?;
    let docs = trees
        .iter()
        .map(|t| {
            (
                t.doc_id.clone(),
                write_rsd(&to_dependencies(&binarize_with(t, a.branching.into()))),
            )
        })
        .collect();
    write_docs(a.out_dir.as_deref(), "rsd", docs, stdout)
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Corpus directory with a manifest.
    corpus: PathBuf,
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Restrict to one partition.
    #[arg(long)]
    partition: Option<Partition>,
    /// One row per genre before the total.
    #[arg(long)]
    by_genre: bool,
    #[command(flatten)]
    out: OutArg,
}

fn stats_row(group: &str, s: &CorpusStats, trees: &[&ConstituentTree]) -> Result<Vec<String>> {
    let mut row = vec![
        group.to_owned(),
        s.docs.to_string(),
        s.tokens.to_string(),
        s.edus.to_string(),
        s.relation_instances.to_string(),
        s.label_count.to_string(),
    ];
    match nuclearity_distribution(trees.iter().copied()) {
        Ok(d) => row.extend([d.ns, d.sn, d.nn].map(|x| format!("{x:.4}"))),
        Err(_) => row.extend(std::iter::repeat_n(String::new(), 3)),
    }
    Ok(row)
}

pub fn stats(cli: &Cli, a: &StatsArgs, stdout: &mut dyn Write) -> Result<()> {
    let mut corpus = read_corpus(&a.corpus, &cli.read_options(a.manifest.as_deref()))?;
    if let Some(p) = a.partition {
        corpus = corpus.partition(p);
    }
    let mut rows = Vec::new();
    if a.by_genre {
        for g in corpus.genres() {
            let trees: Vec<&ConstituentTree> = corpus.trees().filter(|t| t.genre == g).collect();
            rows.push(stats_row(g, &corpus_stats(trees.iter().copied()), &trees)?);
        }
    }
    let all: Vec<&ConstituentTree> = corpus.trees().collect();
    rows.push(stats_row("total", &corpus_stats(all.iter().copied()), &all)?);
    let header = [
        "group",
        "docs",
        "tokens",
        "edus",
        "relation_instances",
        "labels",
        "ns",
        "sn",
        "nn",
    ];
    a.out.emit(stdout, &csv_string(&header, rows)?)
}

#[derive(Debug, Args)]
pub struct MapArgs {
    #[command(subcommand)]
    command: MapCommand,
}

#[derive(Debug, Subcommand)]
enum MapCommand {
    /// Coarse class of a relation label.
    Class {
        label: String,
        #[arg(long, default_value = "gum")]
        scheme: Scheme,
    },
    /// RST-DT class of a GUM relation.
    Rstdt { label: String },
    /// The full mapping table as CSV.
    Table,
    /// Checksum of the mapping table.
    Checksum,
    /// Share of relation instances in a GUM corpus whose mapping leaves the
    /// aligned class.
    Mismatch {
        corpus: PathBuf,
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
}

pub fn map(cli: &Cli, a: &MapArgs, stdout: &mut dyn Write) -> Result<()> {
    let m = RelationMap::builtin();
    match &a.command {
        MapCommand::Class { label, scheme } => writeln!(stdout, "{}", m.to_class(label, *scheme)?)?,
        MapCommand::Rstdt { label } => writeln!(stdout, "{}", m.gum_to_rstdt(label)?)?,
        MapCommand::Table => {
            let rows = m
                .rows()
                .iter()
                .map(|r| vec![r.gum_relation.clone(), r.gum_class.clone(), r.rstdt_class.clone()]);
            stdout.write_all(csv_string(&["gum_relation", "gum_class", "rstdt_class"], rows)?.as_bytes())?;
        }
        MapCommand::Checksum => writeln!(stdout, "{}", m.checksum())?,
        MapCommand::Mismatch { corpus, manifest } => {
            let c = read_corpus(corpus, &cli.read_options(manifest.as_deref()))?;
            writeln!(stdout, "{:.4}", m.mapping_mismatch_rate(c.trees())?)?;
        }
    }
    Ok(())
}
