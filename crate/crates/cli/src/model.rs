use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, ValueEnum};
use rstkit::depconv::to_dependencies;
use rstkit::relmap::LabelMode;
use rstkit::treebank::{write_rs3, write_rsd, Partition};
use rstkit::{binarize, debinarize, Edu};
use rstkit_parser::{parse_tree, stratified_dev, DocView, FeatureConfig, Instance, Model, Stacking, TrainConfig};

use crate::input::{files, genres, par_map, read_corpus, read_edu_lines, read_tree, stem};
use crate::{csv_string, write_file, Cli, OutArg};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DevArg {
    /// The corpus dev partition.
    Dev,
    /// Every 10th training document by EDU count.
    Stratified,
    None,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Corpus directory with a manifest.
    corpus: PathBuf,
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Model file to write.
    #[arg(long)]
    model: PathBuf,
    /// Genres to train on; all when omitted.
    #[arg(long, value_delimiter = ',')]
    genres: Vec<String>,
    #[arg(long, value_enum, default_value = "dev")]
    dev: DevArg,
    /// Relation classes the parser predicts.
    #[arg(long, default_value = "gum")]
    labels: LabelMode,
    #[arg(long, default_value_t = 20)]
    max_epochs: usize,
    #[arg(long, default_value_t = 5)]
    patience: usize,
    #[arg(long)]
    no_organizational: bool,
    #[arg(long)]
    no_conjunctions: bool,
    /// Per-epoch report.
    #[command(flatten)]
    out: OutArg,
}

pub fn train(cli: &Cli, a: &TrainArgs, stdout: &mut dyn Write) -> Result<()> {
    let corpus = read_corpus(&a.corpus, &cli.read_options(a.manifest.as_deref()))?;
    let present = corpus.genres();
    if let Some(g) = a.genres.iter().find(|g| !present.contains(&g.as_str())) {
        bail!("unknown genre `{g}`");
    }
    let corpus = corpus.filter(|d| a.genres.is_empty() || a.genres.iter().any(|g| g == d.genre()));
    let instances = |p: Partition| -> Vec<Instance> {
        corpus
            .partition(p)
            .trees()
            .map(|t| Instance::new(binarize(t)))
            .collect()
    };
    let (tr, dv) = match a.dev {
        DevArg::Dev => (instances(Partition::Train), instances(Partition::Dev)),
        DevArg::Stratified => stratified_dev(instances(Partition::Train), |i| i.tree.len()),
        DevArg::None => (instances(Partition::Train), Vec::new()),
    };
    let cfg = TrainConfig {
        features: FeatureConfig {
            organizational: !a.no_organizational,
            conjunctions: !a.no_conjunctions,
            stacking: Stacking::None,
        },
        labels: a.labels,
        max_epochs: a.max_epochs,
        patience: a.patience,
    };
    log::info!("training on {} documents, {} dev", tr.len(), dv.len());
    let (model, report) = rstkit_parser::train(&tr, &dv, &cfg, cli.seed)?;
    model.save(&a.model)?;
    let rows = report.epochs.iter().map(|e| {
        let dev = |f: fn(&rstkit::metrics::ScoreTriple) -> f64| {
            e.dev.as_ref().map(|d| format!("{:.4}", f(d))).unwrap_or_default()
        };
        vec![
            e.epoch.to_string(),
            e.decisions.to_string(),
            e.errors.to_string(),
            dev(|d| d.s),
            dev(|d| d.n),
            dev(|d| d.r),
            (e.epoch == report.best_epoch).to_string(),
        ]
    });
    a.out.emit(
        stdout,
        &csv_string(
            &["epoch", "decisions", "errors", "dev_S", "dev_N", "dev_R", "kept"],
            rows,
        )?,
    )
}

#[derive(Debug, Args)]
pub struct ParseArgs {
    /// .rs3 files (EDUs and boundary sidecars are used, the tree is not) or
    /// .edus files with one EDU per line; a file or a directory.
    input: PathBuf,
    #[arg(long)]
    model: PathBuf,
    /// Directory for <doc>.rs3 and <doc>.rsd.
    #[arg(long)]
    out_dir: PathBuf,
    /// Genres for the output trees.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

pub fn parse(cli: &Cli, a: &ParseArgs, stdout: &mut dyn Write) -> Result<()> {
    let model = Model::load(&a.model, None)?;
    if model.config.stacking != Stacking::None {
        bail!("stacked models need base-model annotations; run them through `experiment run`");
    }
    let opts = cli.read_options(a.manifest.as_deref());
    let genres = genres(&a.input, &opts)?;
    let mut inputs = files(&a.input, "rs3")?;
    if inputs.is_empty() {
        inputs = files(&a.input, "edus")?;
    }
    if inputs.is_empty() {
        bail!("{}: no .rs3 or .edus input", a.input.display());
    }
    let written = par_map(&inputs, cli.jobs, |p| {
        let id = stem(p);
        let edus: Vec<Edu> = if p.extension().is_some_and(|e| e == "rs3") {
            read_tree(p, &opts)?.edus
        } else {
            read_edu_lines(&std::fs::read_to_string(p)?)
        };
        if edus.is_empty() {
            bail!("`{id}` has no EDUs");
        }
        let genre = genres.get(&id).map(String::as_str).unwrap_or("");
        let tree = parse_tree(&model, &id, genre, &DocView::new(&edus));
        write_file(&a.out_dir.join(format!("{id}.rs3")), &write_rs3(&debinarize(&tree)?))?;
        write_file(
            &a.out_dir.join(format!("{id}.rsd")),
            &write_rsd(&to_dependencies(&tree)),
        )?;
        Ok(id)
    })?;
    writeln!(
        stdout,
        "parsed {} documents into {}",
        written.len(),
        a.out_dir.display()
    )?;
    Ok(())
}
