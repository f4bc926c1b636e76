//! Training with a static oracle, and greedy decoding.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rstkit::binary::BinaryNode;
use rstkit::metrics::{parseval, ParsevalCounts, ParsevalOptions, ScoreTriple};
use rstkit::relmap::LabelMode;
use rstkit::{BinaryTree, Nuclearity};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{extract_features, Annotation, DocView, FeatureConfig};
use crate::model::Model;
use crate::perceptron::Perceptron;
use crate::transition::{oracle, ParserState, Transition};

/// Label used when a reduce is forced but the model knows no reduce action.
pub const FALLBACK_LABEL: &str = "Elaboration";

/// A gold tree with optional stacked annotations.
#[derive(Clone, Debug)]
pub struct Instance {
    pub tree: BinaryTree,
    /// Empty, or one per EDU.
    pub annotations: Vec<Annotation>,
}

impl Instance {
    pub fn new(tree: BinaryTree) -> Self {
        Instance {
            tree,
            annotations: Vec::new(),
        }
    }

    pub fn view(&self) -> DocView<'_> {
        DocView {
            edus: &self.tree.edus,
            annotations: &self.annotations,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub features: FeatureConfig,
    pub labels: LabelMode,
    pub max_epochs: usize,
    /// Epochs without dev improvement before stopping.
    pub patience: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            features: FeatureConfig::default(),
            labels: LabelMode::Coarse(rstkit::relmap::Scheme::Gum),
            max_epochs: 20,
            patience: 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EpochReport {
    pub epoch: usize,
    pub decisions: usize,
    pub errors: usize,
    /// Micro scores of the averaged model on dev, when there is dev data.
    pub dev: Option<ScoreTriple>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct TrainReport {
    pub epochs: Vec<EpochReport>,
    /// Epoch whose averaged weights were kept.
    pub best_epoch: usize,
}

/// Split off every 10th document, after sorting by EDU count, as dev.
pub fn stratified_dev<T>(items: Vec<T>, edus: impl Fn(&T) -> usize) -> (Vec<T>, Vec<T>) {
    let mut keyed: Vec<(usize, usize, T)> = items.into_iter().enumerate().map(|(i, t)| (edus(&t), i, t)).collect();
    keyed.sort_by_key(|(n, i, _)| (*n, *i));
    let mut train = Vec::new();
    let mut dev = Vec::new();
    for (pos, (_, _, t)) in keyed.into_iter().enumerate() {
        if pos % 10 == 9 {
            dev.push(t);
        } else {
            train.push(t);
        }
    }
    (train, dev)
}

fn normalized(inst: &Instance, labels: LabelMode) -> Result<Instance> {
    Ok(Instance {
        tree: inst.tree.map_labels(|l| labels.normalize(l))?,
        annotations: inst.annotations.clone(),
    })
}

pub fn train(train: &[Instance], dev: &[Instance], cfg: &TrainConfig, seed: u64) -> Result<(Model, TrainReport)> {
    warm_start(&Model::empty(cfg.features, cfg.labels), train, dev, cfg, seed)
}

/// Continue training from `pretrained`. Both must use the same label scheme.
pub fn warm_start(
    pretrained: &Model,
    train: &[Instance],
    dev: &[Instance],
    cfg: &TrainConfig,
    seed: u64,
) -> Result<(Model, TrainReport)> {
    if pretrained.labels != cfg.labels {
        return Err(Error::InventoryMismatch {
            model: format!("{:?}", pretrained.labels),
            data: format!("{:?}", cfg.labels),
        });
    }
    if train.is_empty() {
        return Err(Error::EmptyTrainSet);
    }
    let train: Vec<Instance> = train.iter().map(|i| normalized(i, cfg.labels)).collect::<Result<_>>()?;
    let dev: Vec<Instance> = dev.iter().map(|i| normalized(i, cfg.labels)).collect::<Result<_>>()?;
    let oracles: Vec<Vec<Transition>> = train.iter().map(|i| oracle(&i.tree)).collect();

    let known: BTreeSet<&str> = pretrained.weights.classes().iter().map(String::as_str).collect();
    let new: BTreeSet<String> = oracles
        .iter()
        .flatten()
        .map(Transition::id)
        .filter(|id| !known.contains(id.as_str()))
        .collect();
    let mut perceptron = Perceptron::new(pretrained.weights.with_classes(new));
    let classes: Vec<String> = perceptron.weights().classes().to_vec();
    let actions: Vec<Transition> = classes
        .iter()
        .map(|c| Transition::from_id(c).expect("valid ids"))
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..train.len()).collect();
    let mut report = TrainReport::default();
    let mut best: Option<(f64, usize, Model)> = None;

    for epoch in 1..=cfg.max_epochs.max(1) {
        order.shuffle(&mut rng);
        let (mut decisions, mut errors) = (0usize, 0usize);
        for &d in &order {
            let inst = &train[d];
            let view = inst.view();
            let mut state = ParserState::new(inst.tree.len());
            for gold in &oracles[d] {
                let gold_idx = perceptron
                    .weights()
                    .class_index(&gold.id())
                    .expect("gold action is a class");
                if state.can_shift() && state.can_reduce() {
                    let feats = extract_features(&state, &view, &cfg.features);
                    let pred = perceptron
                        .weights()
                        .best(&feats, |c| state.legal(&actions[c]))
                        .expect("gold action is legal");
                    decisions += 1;
                    if pred != gold_idx {
                        errors += 1;
                    }
                    perceptron.update(&feats, gold_idx, pred);
                    perceptron.tick();
                } else if let Transition::Reduce(..) = gold {
                    // Only reduces are legal; the label still has to be learned.
                    let feats = extract_features(&state, &view, &cfg.features);
                    let pred = perceptron
                        .weights()
                        .best(&feats, |c| state.legal(&actions[c]))
                        .expect("gold action is legal");
                    decisions += 1;
                    if pred != gold_idx {
                        errors += 1;
                    }
                    perceptron.update(&feats, gold_idx, pred);
                    perceptron.tick();
                }
                state.apply(gold.clone()).expect("oracle is legal");
            }
        }

        let model = Model::new(cfg.features, cfg.labels, perceptron.averaged())?;
        let dev_score = if dev.is_empty() {
            None
        } else {
            Some(score_instances(&model, &dev)?.scores())
        };
        log::debug!("epoch {epoch}: {errors}/{decisions} errors, dev {dev_score:?}");
        report.epochs.push(EpochReport {
            epoch,
            decisions,
            errors,
            dev: dev_score,
        });

        let s = dev_score.map_or(0.0, |d| d.s);
        let improved = match &best {
            None => true,
            // Without dev data the latest average is kept.
            Some((b, _, _)) => dev_score.is_none() || s > *b,
        };
        if improved {
            best = Some((s, epoch, model));
        }
        let best_epoch = best.as_ref().map_or(epoch, |b| b.1);
        if errors == 0 || (dev_score.is_some() && epoch - best_epoch >= cfg.patience) {
            break;
        }
    }
    let (_, best_epoch, model) = best.expect("at least one epoch ran");
    report.best_epoch = best_epoch;
    Ok((model, report))
}

/// Pooled Parseval counts of `model` on gold instances whose labels are
/// already normalized.
pub fn score_instances(model: &Model, gold: &[Instance]) -> Result<ParsevalCounts> {
    let opts = ParsevalOptions {
        include_root: false,
        labels: LabelMode::Fine,
    };
    let mut total = ParsevalCounts::default();
    for inst in gold {
        let pred = parse(model, &inst.view());
        total += parseval(&inst.tree.root, &pred, &opts)?;
    }
    Ok(total)
}

/// Greedy decoding with illegal actions masked. Always returns a tree over
/// all EDUs, in at most 2n-1 steps.
pub fn parse(model: &Model, doc: &DocView<'_>) -> BinaryNode {
    let mut state = ParserState::new(doc.edus.len());
    let actions = model.actions();
    while !state.is_terminal() {
        let t = if !state.can_reduce() {
            Transition::Shift
        } else {
            let feats = extract_features(&state, doc, &model.config);
            match model.weights.best(&feats, |c| state.legal(&actions[c])) {
                Some(c) => actions[c].clone(),
                None => Transition::Reduce(Nuclearity::NS, FALLBACK_LABEL.to_owned()),
            }
        };
        state.apply(t).expect("masked actions are legal");
    }
    state.finish().expect("loop ends in a terminal state")
}

/// Parse into a tree carrying the document's identity.
pub fn parse_tree(model: &Model, doc_id: &str, genre: &str, doc: &DocView<'_>) -> BinaryTree {
    BinaryTree::new(doc_id, genre, doc.edus.to_vec(), parse(model, doc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rstkit::binary::binarize;
    use rstkit::synth::toy_corpus;

    fn toy(n: usize) -> Vec<Instance> {
        toy_corpus(5, &["news"], n, 10)
            .trees()
            .map(|t| Instance::new(binarize(t)))
            .collect()
    }

    #[test]
    fn single_edu_parse() {
        let m = Model::empty(FeatureConfig::default(), LabelMode::Fine);
        let edus = vec![rstkit::Edu::new(1, "Hi .")];
        assert_eq!(parse(&m, &DocView::new(&edus)), BinaryNode::Leaf(1));
    }

    #[test]
    fn empty_model_still_terminates() {
        let m = Model::empty(FeatureConfig::default(), LabelMode::Fine);
        let inst = &toy(1)[0];
        let tree = parse(&m, &inst.view());
        assert_eq!(tree.span(), (1, inst.tree.len()));
    }

    #[test]
    fn empty_train_set() {
        assert!(matches!(
            train(&[], &[], &TrainConfig::default(), 1),
            Err(Error::EmptyTrainSet)
        ));
    }

    #[test]
    fn memorizes_one_document() {
        let data = toy(1);
        let (m, _) = train(&data, &[], &TrainConfig::default(), 1).unwrap();
        let gold = normalized(&data[0], m.labels).unwrap();
        assert_eq!(parse(&m, &gold.view()), gold.tree.root);
    }

    #[test]
    fn seed_determinism() {
        let data = toy(8);
        let (a, ra) = train(&data, &data[..2], &TrainConfig::default(), 3).unwrap();
        let (b, rb) = train(&data, &data[..2], &TrainConfig::default(), 3).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(ra, rb);
    }

    #[test]
    fn warm_start_from_empty_equals_train() {
        let data = toy(6);
        let cfg = TrainConfig::default();
        let (a, _) = train(&data, &[], &cfg, 9).unwrap();
        let (b, _) = warm_start(&Model::empty(cfg.features, cfg.labels), &data, &[], &cfg, 9).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        let other = Model::empty(cfg.features, LabelMode::Fine);
        assert!(matches!(
            warm_start(&other, &data, &[], &cfg, 9),
            Err(Error::InventoryMismatch { .. })
        ));
    }

    #[test]
    fn stratified_split_takes_every_tenth() {
        let (train, dev) = stratified_dev((0..25).rev().collect::<Vec<usize>>(), |&n| n);
        assert_eq!(dev, [9, 19]);
        assert_eq!(train.len(), 23);
    }
}
