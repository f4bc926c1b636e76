//! Running an experiment: one training per seed, scoring every target.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rstkit::binary::binarize;
use rstkit::depconv::to_dependencies;
use rstkit::metrics::{parseval, ParsevalCounts, ParsevalOptions};
use rstkit::relmap::{LabelMode, RelationMap, Scheme};
use rstkit::treebank::{write_rs3, write_rsd, Corpus};
use rstkit::{debinarize, BinaryTree, Edu};
use rstkit_parser::stacking::{stack_features_from_parser, window_label_tagger};
use rstkit_parser::{
    parse_tree, stratified_dev, train, warm_start, Annotation, Instance, Model, Stacking, TrainConfig,
};

use crate::config::{check_no_leakage, DevPolicy, ExperimentConfig, Regime, Selection};
use crate::error::{Error, Result};
use crate::report::{RunRow, ScoreReport};

pub type Corpora = BTreeMap<String, Corpus>;

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Outputs go to `<out_dir>/<name>/<seed>/`; nothing is written without it.
    pub out_dir: Option<PathBuf>,
    /// Runs trained concurrently; 0 and 1 both mean one at a time.
    pub jobs: usize,
}

/// Binarized tree with labels moved into the target inventory. GUM sources
/// trained into RST-DT classes go through the relation mapping first.
fn prepare_tree(tree: &rstkit::ConstituentTree, scheme: Scheme, labels: LabelMode) -> Result<BinaryTree> {
    let b = binarize(tree);
    if scheme == Scheme::Gum && labels == LabelMode::Coarse(Scheme::Rstdt) {
        Ok(b.map_labels(|l| RelationMap::builtin().gum_to_rstdt(l))?)
    } else {
        Ok(b)
    }
}

fn instances(sels: &[Selection], corpora: &Corpora, labels: LabelMode) -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    for s in sels {
        for d in s.resolve(corpora)? {
            out.push(Instance::new(prepare_tree(&d.tree, s.scheme, labels)?));
        }
    }
    Ok(out)
}

fn split(
    train: Vec<Instance>,
    dev: &DevPolicy,
    corpora: &Corpora,
    labels: LabelMode,
) -> Result<(Vec<Instance>, Vec<Instance>)> {
    match dev {
        DevPolicy::None => Ok((train, Vec::new())),
        DevPolicy::Stratified => Ok(stratified_dev(train, |i| i.tree.len())),
        DevPolicy::Sources { sources } => Ok((train, instances(sources, corpora, labels)?)),
    }
}

struct TestSet {
    name: String,
    /// Gold with labels normalized to the experiment's classes.
    docs: Vec<Instance>,
}

struct Prepared {
    train: Vec<Instance>,
    dev: Vec<Instance>,
    base: Option<(Vec<Instance>, Vec<Instance>, LabelMode)>,
    tests: Vec<TestSet>,
}

fn prepare(cfg: &ExperimentConfig, corpora: &Corpora) -> Result<Prepared> {
    let (train, dev) = split(
        instances(&cfg.train, corpora, cfg.labels)?,
        &cfg.dev,
        corpora,
        cfg.labels,
    )?;
    let base = match &cfg.base {
        Some(b) if cfg.regime.needs_base() => {
            let labels = if cfg.regime == Regime::WarmStart {
                cfg.labels
            } else {
                b.labels
            };
            let (t, d) = split(instances(&b.train, corpora, labels)?, &b.dev, corpora, labels)?;
            Some((t, d, labels))
        }
        _ => None,
    };
    let tests = cfg
        .test
        .iter()
        .map(|t| {
            let docs = instances(std::slice::from_ref(&t.selection), corpora, cfg.labels)?
                .into_iter()
                .map(|i| {
                    Ok(Instance {
                        tree: i.tree.map_labels(|l| cfg.labels.normalize(l))?,
                        annotations: Vec::new(),
                    })
                })
                .collect::<Result<_>>()?;
            Ok(TestSet {
                name: t.name.clone(),
                docs,
            })
        })
        .collect::<Result<_>>()?;
    Ok(Prepared {
        train,
        dev,
        base,
        tests,
    })
}

fn annotate(docs: &mut [Instance], f: &dyn Fn(&[Edu]) -> Vec<Annotation>) {
    for d in docs {
        d.annotations = f(&d.tree.edus);
    }
}

fn train_config(cfg: &ExperimentConfig, labels: LabelMode, stacking: Stacking) -> TrainConfig {
    let mut features = cfg.features;
    features.stacking = stacking;
    TrainConfig {
        features,
        labels,
        max_epochs: cfg.max_epochs,
        patience: cfg.patience,
    }
}

/// Train one model under the experiment's regime; stacking regimes also
/// annotate the training, dev and test documents.
/// Model plus the train, dev and test documents it saw, annotated.
type Fitted = (Model, Vec<Instance>, Vec<Instance>, Vec<TestSet>);

fn fit(cfg: &ExperimentConfig, p: &Prepared, seed: u64) -> Result<Fitted> {
    let mut tr = p.train.clone();
    let mut dv = p.dev.clone();
    let mut tests: Vec<TestSet> = p
        .tests
        .iter()
        .map(|t| TestSet {
            name: t.name.clone(),
            docs: t.docs.clone(),
        })
        .collect();
    let plain = train_config(cfg, cfg.labels, Stacking::None);
    let base = || p.base.as_ref().expect("validated: regime has a base");

    let stacking = match cfg.regime {
        Regime::Plain | Regime::Concat => Stacking::None,
        Regime::WarmStart => {
            let (btr, bdv, _) = base();
            let (pre, _) = train(btr, bdv, &plain, seed)?;
            let (m, _) = warm_start(&pre, &tr, &dv, &plain, seed)?;
            return Ok((m, tr, dv, tests));
        }
        Regime::FlairLabel => {
            let (btr, _, labels) = base();
            let deps: Vec<_> = btr.iter().map(|i| to_dependencies(&i.tree)).collect();
            let tagger = window_label_tagger(&deps, *labels, cfg.max_epochs, seed)?;
            let f = |e: &[Edu]| tagger.annotate(e);
            annotate(&mut tr, &f);
            annotate(&mut dv, &f);
            for t in &mut tests {
                annotate(&mut t.docs, &f);
            }
            Stacking::Label
        }
        Regime::SrLabel | Regime::SrGraph => {
            let mode = if cfg.regime == Regime::SrLabel {
                Stacking::Label
            } else {
                Stacking::Graph
            };
            let (btr, bdv, labels) = base();
            let (bm, _) = train(btr, bdv, &train_config(cfg, *labels, Stacking::None), seed)?;
            let f = |e: &[Edu]| stack_features_from_parser(&bm, &[e], mode).pop().expect("one document");
            annotate(&mut tr, &f);
            annotate(&mut dv, &f);
            for t in &mut tests {
                annotate(&mut t.docs, &f);
            }
            mode
        }
    };
    let (m, _) = train(&tr, &dv, &train_config(cfg, cfg.labels, stacking), seed)?;
    Ok((m, tr, dv, tests))
}

fn write(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).map_err(|e| Error::io(path, e))
}

fn run_one(cfg: &ExperimentConfig, p: &Prepared, seed: u64, out: Option<&Path>) -> Result<Vec<RunRow>> {
    let (model, _, _, tests) = fit(cfg, p, seed)?;
    let dir = out.map(|o| o.join(&cfg.name).join(seed.to_string()));
    if let Some(d) = &dir {
        let parses = d.join("parses");
        fs::create_dir_all(&parses).map_err(|e| Error::io(&parses, e))?;
        model.save(&d.join("model.bin"))?;
    }
    let opts = ParsevalOptions {
        include_root: false,
        labels: LabelMode::Fine,
    };
    let mut rows = Vec::new();
    for t in &tests {
        let mut counts = ParsevalCounts::default();
        for gold in &t.docs {
            let pred = parse_tree(&model, &gold.tree.doc_id, &gold.tree.genre, &gold.view());
            counts += parseval(&gold.tree.root, &pred.root, &opts)?;
            if let Some(d) = &dir {
                let base = d.join("parses").join(&gold.tree.doc_id);
                write(&base.with_extension("rs3"), &write_rs3(&debinarize(&pred)?))?;
                write(&base.with_extension("rsd"), &write_rsd(&to_dependencies(&pred)))?;
            }
        }
        rows.push(RunRow {
            seed,
            target: t.name.clone(),
            counts,
            scores: counts.scores(),
        });
    }
    if let Some(d) = &dir {
        let report = ScoreReport {
            name: cfg.name.clone(),
            rows: rows.clone(),
        };
        write(&d.join("report.csv"), &report.to_csv()?)?;
    }
    Ok(rows)
}

/// Train and score every run. Runs are independent and may execute
/// concurrently; rows come back in seed order either way.
pub fn run(cfg: &ExperimentConfig, corpora: &Corpora, opts: &RunOptions) -> Result<ScoreReport> {
    cfg.validate()?;
    check_no_leakage(cfg, corpora)?;
    let prepared = prepare(cfg, corpora)?;
    if prepared.train.is_empty() {
        return Err(rstkit_parser::Error::EmptyTrainSet.into());
    }
    let out = opts.out_dir.as_deref();
    let mut results: Vec<Result<Vec<RunRow>>> = Vec::with_capacity(cfg.seeds.len());
    for chunk in cfg.seeds.chunks(opts.jobs.max(1)) {
        std::thread::scope(|s| {
            let handles: Vec<_> = chunk
                .iter()
                .map(|&seed| {
                    let p = &prepared;
                    s.spawn(move || run_one(cfg, p, seed, out))
                })
                .collect();
            results.extend(handles.into_iter().map(|h| h.join().expect("run thread panicked")));
        });
    }
    let mut report = ScoreReport {
        name: cfg.name.clone(),
        rows: Vec::new(),
    };
    for r in results {
        report.rows.extend(r?);
    }
    if let Some(o) = out {
        let dir = o.join(&cfg.name);
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        write(&dir.join("report.csv"), &report.to_csv()?)?;
        write(&dir.join("config.toml"), &cfg.to_toml())?;
    }
    Ok(report)
}
