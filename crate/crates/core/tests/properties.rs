//! Randomized invariants checked against small independent reimplementations.

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rstkit::binary::{binarize, binarize_with, debinarize, BinaryNode, Branching};
use rstkit::depconv::{cdu, to_dependencies};
use rstkit::metrics::{parseval, ParsevalOptions};
use rstkit::relmap::LabelMode;
use rstkit::stats::nuclearity_distribution;
use rstkit::synth::random_tree;
use rstkit::tree::NodeShape;
use rstkit::treebank::{parse_rs3, parse_rsd, write_rs3, write_rsd};
use rstkit::{ConstituentTree, Node, Nuclearity};

fn tree(seed: u64, n: usize) -> ConstituentTree {
    random_tree(&mut ChaCha8Rng::seed_from_u64(seed), "p", "news", n)
}

type Span = (usize, usize);

/// Span sets per match level, built by explicit enumeration.
fn span_sets(root: &BinaryNode, include_root: bool) -> [BTreeSet<String>; 3] {
    fn go(n: &BinaryNode, out: &mut Vec<(Span, Nuclearity, String)>) {
        if let BinaryNode::Internal(i) = n {
            out.push((i.span, i.category, i.label.clone()));
            go(&i.left, out);
            go(&i.right, out);
        }
    }
    let mut units = Vec::new();
    go(root, &mut units);
    let mut sets: [BTreeSet<String>; 3] = Default::default();
    for (span, cat, label) in units {
        if !include_root && span == root.span() {
            continue;
        }
        sets[0].insert(format!("{span:?}"));
        sets[1].insert(format!("{span:?}|{cat}"));
        sets[2].insert(format!("{span:?}|{cat}|{label}"));
    }
    sets
}

fn brute_force(gold: &BinaryNode, pred: &BinaryNode, include_root: bool) -> ([usize; 3], usize, usize) {
    let g = span_sets(gold, include_root);
    let p = span_sets(pred, include_root);
    let m = [0, 1, 2].map(|k| g[k].intersection(&p[k]).count());
    (m, g[0].len(), p[0].len())
}

/// Heads on the n-ary tree: nucleus for mononuclear nodes, first child for
/// multinuclear ones. Fills `arcs[dep - 1] = (head, label)`.
fn nary_heads(node: &Node, arcs: &mut Vec<(usize, String)>) -> usize {
    if node.is_leaf() {
        return node.span().0;
    }
    let heads: Vec<usize> = node.children().iter().map(|c| nary_heads(c, arcs)).collect();
    match node.shape().unwrap() {
        NodeShape::Multinuclear(label) => {
            for &h in &heads[1..] {
                arcs[h - 1] = (heads[0], label.to_owned());
            }
            heads[0]
        }
        NodeShape::Mononuclear { nucleus } => {
            for (i, c) in node.children().iter().enumerate() {
                if i != nucleus {
                    arcs[heads[i] - 1] = (heads[nucleus], c.relation().to_owned());
                }
            }
            heads[nucleus]
        }
    }
}

fn relabel(node: &BinaryNode, flip: u64) -> BinaryNode {
    match node {
        BinaryNode::Leaf(i) => BinaryNode::Leaf(*i),
        BinaryNode::Internal(n) => {
            let (cat, label) = if (n.span.0 as u64 ^ flip).is_multiple_of(3) {
                let c = match n.category {
                    Nuclearity::NS => Nuclearity::SN,
                    Nuclearity::SN => Nuclearity::NN,
                    Nuclearity::NN => Nuclearity::NS,
                };
                (c, n.label.clone())
            } else if (n.span.1 as u64 ^ flip).is_multiple_of(4) {
                (n.category, "causal-cause".to_owned())
            } else {
                (n.category, n.label.clone())
            };
            BinaryNode::join(cat, label, relabel(&n.left, flip), relabel(&n.right, flip))
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn binarization_round_trips(seed in any::<u64>(), n in 1usize..30) {
        let t = tree(seed, n);
        for branching in [Branching::Right, Branching::Left] {
            let b = binarize_with(&t, branching);
            prop_assert_eq!(b.root.units().len(), n - 1);
            prop_assert_eq!(b.root.span(), (1, n));
            prop_assert!(debinarize(&b).unwrap().structurally_eq(&t));
        }
    }

    #[test]
    fn rs3_round_trips(seed in any::<u64>(), n in 1usize..30) {
        let t = tree(seed, n);
        let again = parse_rs3(&write_rs3(&t), "p").unwrap();
        prop_assert!(again.structurally_eq(&t));
    }

    #[test]
    fn dependencies_match_nary_head_rules(seed in any::<u64>(), n in 1usize..30) {
        let t = tree(seed, n);
        let d = to_dependencies(&binarize(&t));
        prop_assert_eq!(d.arcs.len(), n);
        prop_assert_eq!(d.arcs.iter().filter(|a| a.head == 0).count(), 1);
        d.validate().unwrap();

        let mut expected = vec![(0, "root".to_owned()); n];
        let root = nary_heads(&t.root, &mut expected);
        expected[root - 1] = (0, "root".to_owned());
        let got: Vec<(usize, String)> = d.arcs.iter().map(|a| (a.head, a.label.clone())).collect();
        prop_assert_eq!(got, expected);
        prop_assert_eq!(cdu(&d).unwrap(), root);

        // Unaffected by a trip through the n-ary form.
        let again = to_dependencies(&binarize(&debinarize(&binarize(&t)).unwrap()));
        prop_assert_eq!(again, d.clone());
        // rsd keeps text and arcs only.
        let back = parse_rsd(&write_rsd(&d), "p").unwrap();
        prop_assert_eq!(&back.arcs, &d.arcs);
        prop_assert!(back.edus.iter().zip(&d.edus).all(|(a, b)| a.text == b.text));
    }

    #[test]
    fn nuclearity_distribution_sums_to_one(seed in any::<u64>(), n in 2usize..30) {
        let t = tree(seed, n);
        let d = nuclearity_distribution([&t]).unwrap();
        prop_assert!((d.ns + d.sn + d.nn - 1.0).abs() < 1e-9);
    }

    #[test]
    fn parseval_identity_and_monotone(seed in any::<u64>(), n in 1usize..30, flip in any::<u64>()) {
        let t = binarize(&tree(seed, n)).root;
        let opts = ParsevalOptions::default();
        let same = parseval(&t, &t, &opts).unwrap().scores();
        prop_assert_eq!((same.s, same.n, same.r), (100.0, 100.0, 100.0));

        let other = binarize(&tree(seed ^ flip, n)).root;
        for pred in [relabel(&t, flip), other] {
            let c = parseval(&t, &pred, &opts).unwrap();
            prop_assert!(c.matched_r <= c.matched_n && c.matched_n <= c.matched_s);
            prop_assert_eq!(c.gold_units, c.pred_units);
        }
    }

    #[test]
    fn parseval_equals_brute_force(seed in any::<u64>(), n in 1usize..=12, other in any::<u64>(), include_root in any::<bool>()) {
        let gold = binarize(&tree(seed, n)).root;
        let pred = binarize(&tree(other, n)).root;
        let opts = ParsevalOptions { include_root, labels: LabelMode::Fine };
        let c = parseval(&gold, &pred, &opts).unwrap();
        let (m, g, p) = brute_force(&gold, &pred, include_root);
        prop_assert_eq!([c.matched_s, c.matched_n, c.matched_r], m);
        prop_assert_eq!((c.gold_units, c.pred_units), (g, p));
    }
}
