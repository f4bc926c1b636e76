//! Per-EDU predictions used as stacked features.
//!
//! Two sources: a sequence tagger that guesses each EDU's dependency label
//! from a three-EDU window, and a base parser whose output is converted to
//! dependencies.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rstkit::depconv::to_dependencies;
use rstkit::relmap::LabelMode;
use rstkit::treebank::{DepDocument, ROOT_LABEL};
use rstkit::Edu;

use crate::error::{Error, Result};
use crate::features::{distance_bucket, Annotation, Direction, DocView, Stacking};
use crate::model::Model;
use crate::perceptron::{Perceptron, Weights};
use crate::train::parse_tree;

fn window_features(edus: &[Edu], i: usize) -> Vec<String> {
    let mut f: Vec<String> = edus[i]
        .tokens()
        .map(|t| format!("w0_tok={}", t.to_lowercase()))
        .collect();
    let prev = if i == 0 {
        "<s>".to_owned()
    } else {
        edus[i - 1].tokens().last().unwrap_or("").to_lowercase()
    };
    let next = edus
        .get(i + 1)
        .map_or("</s>".to_owned(), |e| e.tokens().next().unwrap_or("").to_lowercase());
    let first = edus[i].tokens().next().unwrap_or("").to_lowercase();
    f.push(format!("w0_first={first}"));
    f.push(format!("wL_last={prev}"));
    f.push(format!("wR_first={next}"));
    f.push(format!("wL_w0={prev}|{first}"));
    f
}

/// Label tagger over EDU windows.
#[derive(Clone, Debug)]
pub struct WindowTagger {
    weights: Weights,
    /// Most frequent training label, used when nothing about an EDU is known.
    majority: String,
}

fn normalized_label(label: &str, labels: LabelMode) -> Result<String> {
    if label == ROOT_LABEL {
        Ok(label.to_owned())
    } else {
        Ok(labels.normalize(label)?)
    }
}

pub fn window_label_tagger(docs: &[DepDocument], labels: LabelMode, epochs: usize, seed: u64) -> Result<WindowTagger> {
    let mut examples: Vec<(Vec<String>, String)> = Vec::new();
    for d in docs {
        for (i, arc) in d.arcs.iter().enumerate() {
            examples.push((window_features(&d.edus, i), normalized_label(&arc.label, labels)?));
        }
    }
    if examples.is_empty() {
        return Err(Error::EmptyTrainSet);
    }
    let mut freq: BTreeMap<&str, usize> = BTreeMap::new();
    for (_, l) in &examples {
        *freq.entry(l).or_default() += 1;
    }
    // Ties go to the alphabetically first label.
    let majority = freq
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
        .map(|(l, _)| l.to_string())
        .expect("non-empty");

    let mut p = Perceptron::new(Weights::new(freq.keys().map(|s| s.to_string()).collect()));
    let mut order: Vec<usize> = (0..examples.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..epochs.max(1) {
        order.shuffle(&mut rng);
        let mut errors = 0;
        for &k in &order {
            let (f, gold) = &examples[k];
            let g = p.weights().class_index(gold).expect("label is a class");
            let pred = p.weights().best(f, |_| true).expect("classes exist");
            if pred != g {
                errors += 1;
            }
            p.update(f, g, pred);
            p.tick();
        }
        if errors == 0 {
            break;
        }
    }
    Ok(WindowTagger {
        weights: p.averaged(),
        majority,
    })
}

impl WindowTagger {
    pub fn tag(&self, edus: &[Edu]) -> Vec<String> {
        (0..edus.len())
            .map(|i| {
                let f = window_features(edus, i);
                if !f.iter().any(|x| self.weights.knows(x)) {
                    return self.majority.clone();
                }
                let c = self.weights.best(&f, |_| true).expect("classes exist");
                self.weights.classes()[c].clone()
            })
            .collect()
    }

    pub fn annotate(&self, edus: &[Edu]) -> Vec<Annotation> {
        self.tag(edus)
            .into_iter()
            .map(|l| Annotation {
                label: Some(l),
                ..Default::default()
            })
            .collect()
    }
}

/// Annotations read off a dependency analysis.
pub fn annotations_from_dependencies(doc: &DepDocument, mode: Stacking) -> Vec<Annotation> {
    doc.arcs
        .iter()
        .map(|a| match mode {
            Stacking::None => Annotation::default(),
            Stacking::Label => Annotation {
                label: Some(a.label.clone()),
                ..Default::default()
            },
            Stacking::Graph => {
                let direction = if a.head == 0 {
                    Direction::Root
                } else if a.head < a.dependent {
                    Direction::Left
                } else {
                    Direction::Right
                };
                let distance = if a.head == 0 { 0 } else { a.head.abs_diff(a.dependent) };
                Annotation {
                    label: None,
                    direction: Some(direction),
                    distance: Some(distance_bucket(distance).to_owned()),
                }
            }
        })
        .collect()
}

/// Parse each document with `base` and annotate its EDUs from the converted
/// dependencies.
pub fn stack_features_from_parser(base: &Model, docs: &[&[Edu]], mode: Stacking) -> Vec<Vec<Annotation>> {
    docs.iter()
        .map(|edus| {
            let tree = parse_tree(base, "", "", &DocView::new(edus));
            annotations_from_dependencies(&to_dependencies(&tree), mode)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rstkit::binary::BinaryNode;
    use rstkit::{BinaryTree, Nuclearity};

    fn pair() -> DepDocument {
        let edus = vec![Edu::new(1, "Prices rose ."), Edu::new(2, "Demand was high .")];
        let t = BinaryTree::new(
            "d",
            "news",
            edus,
            BinaryNode::join(Nuclearity::NS, "elaboration", BinaryNode::Leaf(1), BinaryNode::Leaf(2)),
        );
        to_dependencies(&t)
    }

    #[test]
    fn graph_annotations() {
        let a = annotations_from_dependencies(&pair(), Stacking::Graph);
        assert_eq!(a[0].direction, Some(Direction::Root));
        assert_eq!(a[0].distance.as_deref(), Some("0"));
        assert_eq!(a[1].direction, Some(Direction::Left));
        assert_eq!(a[1].distance.as_deref(), Some("1"));
        let l = annotations_from_dependencies(&pair(), Stacking::Label);
        assert_eq!(l[1].label.as_deref(), Some("elaboration"));
    }

    #[test]
    fn tagger_learns_and_falls_back() {
        let d = pair();
        let t = window_label_tagger(std::slice::from_ref(&d), LabelMode::Fine, 5, 1).unwrap();
        assert_eq!(t.tag(&d.edus), ["root", "elaboration"]);
        let unseen = vec![Edu::new(1, "zzz")];
        // Boundary features are known, so this is a model guess, not fallback.
        assert_eq!(t.tag(&unseen).len(), 1);
        assert!(matches!(
            window_label_tagger(&[], LabelMode::Fine, 5, 1),
            Err(Error::EmptyTrainSet)
        ));
    }
}
