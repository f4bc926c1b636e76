use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rstkit::binary::binarize;
use rstkit::metrics::{parseval, ParsevalCounts, ParsevalOptions};
use rstkit::relmap::LabelMode;
use rstkit::synth::{random_tree, toy_corpus};
use rstkit_parser::stacking::stack_features_from_parser;
use rstkit_parser::train::score_instances;
use rstkit_parser::{oracle, parse, replay, train, warm_start, Instance, Model, Stacking, TrainConfig, Transition};

fn toy(seed: u64, genres: &[&str], per_genre: usize) -> Vec<Instance> {
    toy_corpus(seed, genres, per_genre, 12)
        .trees()
        .map(|t| Instance::new(binarize(t)))
        .collect()
}

fn normalized(data: &[Instance], labels: LabelMode) -> Vec<Instance> {
    data.iter()
        .map(|i| Instance {
            tree: i.tree.map_labels(|l| labels.normalize(l)).unwrap(),
            annotations: i.annotations.clone(),
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn oracle_replays_gold(seed in any::<u64>(), n in 1usize..40) {
        let t = binarize(&random_tree(&mut ChaCha8Rng::seed_from_u64(seed), "p", "news", n));
        let seq = oracle(&t);
        prop_assert_eq!(seq.len(), 2 * n - 1);
        prop_assert_eq!(seq.iter().filter(|a| matches!(a, Transition::Shift)).count(), n);
        let back = replay("p", "news", &t.edus, &seq).unwrap();
        prop_assert_eq!(back.root, t.root);
    }
}

#[test]
fn fits_toy_corpus_in_sample() {
    let data = toy(11, &["news", "bio"], 10);
    assert_eq!(data.len(), 20);
    let cfg = TrainConfig::default();
    let (model, report) = train(&data, &[], &cfg, 1).unwrap();
    assert!(report.epochs.len() <= 20);
    let s = score_instances(&model, &normalized(&data, cfg.labels))
        .unwrap()
        .scores();
    assert!(s.s >= 95.0, "in-sample S = {:.2}", s.s);
}

#[test]
fn same_seed_same_bytes() {
    let data = toy(4, &["news"], 12);
    let cfg = TrainConfig::default();
    let a = train(&data, &data[..3], &cfg, 2).unwrap().0.to_json();
    let b = train(&data, &data[..3], &cfg, 2).unwrap().0.to_json();
    assert_eq!(a, b);
}

#[test]
fn model_file_round_trip() {
    let data = toy(4, &["news"], 6);
    let cfg = TrainConfig::default();
    let (model, _) = train(&data, &[], &cfg, 2).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.bin");
    model.save(&path).unwrap();
    let back = Model::load(&path, Some(&cfg.features)).unwrap();
    assert_eq!(back, model);
    for inst in &data {
        assert_eq!(parse(&back, &inst.view()), parse(&model, &inst.view()));
    }
}

#[test]
fn warm_start_on_same_data_stays_close() {
    let data = toy(21, &["news", "how-to"], 8);
    let cfg = TrainConfig::default();
    let gold = normalized(&data, cfg.labels);
    let (base, _) = train(&data, &[], &cfg, 1).unwrap();
    let before = score_instances(&base, &gold).unwrap().scores().s;
    let (warm, _) = warm_start(&base, &data, &[], &cfg, 1).unwrap();
    let after = score_instances(&warm, &gold).unwrap().scores().s;
    assert!((after - before).abs() < 1.0, "{before} vs {after}");
}

#[test]
fn stacked_graph_features_train_and_parse() {
    let data = toy(8, &["news"], 8);
    let cfg = TrainConfig::default();
    let (base, _) = train(&data, &[], &cfg, 1).unwrap();
    let edus: Vec<&[rstkit::Edu]> = data.iter().map(|i| i.tree.edus.as_slice()).collect();
    let ann = stack_features_from_parser(&base, &edus, Stacking::Graph);
    let stacked: Vec<Instance> = data
        .iter()
        .zip(ann)
        .map(|(i, a)| {
            assert_eq!(a.len(), i.tree.len());
            Instance {
                tree: i.tree.clone(),
                annotations: a,
            }
        })
        .collect();
    let mut scfg = cfg;
    scfg.features.stacking = Stacking::Graph;
    let (m, _) = train(&stacked, &[], &scfg, 1).unwrap();
    let mut total = ParsevalCounts::default();
    for (g, i) in normalized(&stacked, cfg.labels).iter().zip(&stacked) {
        total += parseval(
            &g.tree.root,
            &parse(&m, &i.view()),
            &ParsevalOptions {
                include_root: false,
                labels: LabelMode::Fine,
            },
        )
        .unwrap();
    }
    assert!(total.scores().s > 50.0);
}
