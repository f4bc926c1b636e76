//! Seeded synthetic RST documents for tests, demos and smoke experiments.
//!
//! Trees are random but valid. Satellite and non-first multinuclear EDUs
//! start with a cue word tied to their relation; part of the cue vocabulary
//! is genre specific, so models trained on some genres degrade on others.

use rand::seq::SliceRandom;
use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::tree::{ConstituentTree, Edu, Node, Role, SPAN};
use crate::treebank::{Corpus, CorpusDocument, Partition};

pub const MULTINUC_LABELS: [&str; 5] = [
    "joint-list",
    "joint-sequence",
    "joint-other",
    "adversative-contrast",
    "same-unit",
];

pub const RST_LABELS: [&str; 16] = [
    "elaboration-additional",
    "elaboration-attribute",
    "attribution-positive",
    "context-background",
    "context-circumstance",
    "causal-cause",
    "causal-result",
    "contingency-condition",
    "purpose-goal",
    "purpose-attribute",
    "evaluation-comment",
    "explanation-evidence",
    "adversative-concession",
    "organization-preparation",
    "restatement-partial",
    "mode-manner",
];

const FILLER: [&str; 24] = [
    "the", "a", "report", "people", "city", "was", "is", "new", "time", "they", "we", "it", "work", "said", "year",
    "of", "in", "on", "with", "group", "plan", "house", "water", "day",
];

#[derive(Clone, Debug)]
struct GenreProfile {
    prefix: String,
    rst_weights: Vec<f64>,
    multinuc_weights: Vec<f64>,
    /// Probability that a cue comes from the shared vocabulary.
    shared_cue: f64,
    mononuclear: f64,
}

impl GenreProfile {
    fn new(genre: &str) -> Self {
        let seed = genre
            .bytes()
            .fold(0xcbf29ce484222325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        GenreProfile {
            prefix: genre.chars().filter(char::is_ascii_alphabetic).take(3).collect(),
            rst_weights: RST_LABELS.iter().map(|_| 0.5 + 4.0 * rng.random::<f64>()).collect(),
            multinuc_weights: MULTINUC_LABELS
                .iter()
                .map(|_| 0.5 + 4.0 * rng.random::<f64>())
                .collect(),
            shared_cue: 0.45 + 0.3 * rng.random::<f64>(),
            mononuclear: 0.6 + 0.2 * rng.random::<f64>(),
        }
    }
}

fn weighted<R: Rng>(rng: &mut R, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let mut x = rng.random::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        if x < *w {
            return i;
        }
        x -= w;
    }
    weights.len() - 1
}

fn cue_word(label: &str, profile: &GenreProfile, shared: bool) -> String {
    let sub = label.rsplit('-').next().unwrap_or(label);
    if shared {
        sub.to_owned()
    } else {
        format!("{}{}", profile.prefix, sub)
    }
}

struct Builder<'a, R> {
    rng: &'a mut R,
    profile: &'a GenreProfile,
    cues: Vec<Option<String>>,
}

impl<R: Rng> Builder<'_, R> {
    fn cue(&mut self, edu: usize, label: &str) {
        if self.cues[edu - 1].is_none() {
            let shared = self.rng.random_bool(self.profile.shared_cue);
            self.cues[edu - 1] = Some(cue_word(label, self.profile, shared));
        }
    }

    fn split(&mut self, a: usize, b: usize) -> Vec<(usize, usize)> {
        let len = b + 1 - a;
        let k = if len >= 3 && self.rng.random_bool(0.25) { 3 } else { 2 };
        let mut cuts: Vec<usize> = (a + 1..=b).collect();
        cuts.shuffle(self.rng);
        cuts.truncate(k - 1);
        cuts.sort_unstable();
        let mut parts = Vec::with_capacity(k);
        let mut start = a;
        for c in cuts {
            parts.push((start, c - 1));
            start = c;
        }
        parts.push((start, b));
        parts
    }

    fn node(&mut self, a: usize, b: usize, role: Role, relation: Option<&str>) -> Node {
        if a == b {
            return Node::leaf(role, relation, a);
        }
        let parts = self.split(a, b);
        let kids = if self.rng.random_bool(self.profile.mononuclear) {
            // Mostly left nuclei, as in natural text.
            let nucleus = if self.rng.random_bool(0.75) { 0 } else { parts.len() - 1 };
            let labels: Vec<&str> = parts
                .iter()
                .map(|_| RST_LABELS[weighted(self.rng, &self.profile.rst_weights)])
                .collect();
            for (i, &(s, _)) in parts.iter().enumerate() {
                if i != nucleus {
                    self.cue(s, labels[i]);
                }
            }
            parts
                .iter()
                .enumerate()
                .map(|(i, &(s, e))| {
                    if i == nucleus {
                        self.node(s, e, Role::Nucleus, Some(SPAN))
                    } else {
                        self.node(s, e, Role::Satellite, Some(labels[i]))
                    }
                })
                .collect()
        } else {
            let label = MULTINUC_LABELS[weighted(self.rng, &self.profile.multinuc_weights)];
            for &(s, _) in &parts[1..] {
                self.cue(s, label);
            }
            parts
                .iter()
                .map(|&(s, e)| self.node(s, e, Role::Nucleus, Some(label)))
                .collect()
        };
        Node::internal(role, relation, kids)
    }
}

/// Random valid tree over `n` EDUs.
pub fn random_tree<R: Rng>(rng: &mut R, doc_id: &str, genre: &str, n: usize) -> ConstituentTree {
    assert!(n > 0, "a document needs at least one EDU");
    let profile = GenreProfile::new(genre);
    let mut b = Builder {
        rng,
        profile: &profile,
        cues: vec![None; n],
    };
    let root = b.node(1, n, Role::Root, None);
    let cues = std::mem::take(&mut b.cues);
    let rng = b.rng;

    let mut sentence = 0u32;
    let mut paragraph = 0u32;
    let mut edus = Vec::with_capacity(n);
    for (i, cue) in cues.into_iter().enumerate() {
        if i > 0 && rng.random_bool(0.45) {
            sentence += 1;
            if rng.random_bool(0.3) {
                paragraph += 1;
            }
        }
        let len = rng.random_range(3..10);
        let mut words: Vec<String> = cue.into_iter().collect();
        while words.len() < len {
            let w = if rng.random_bool(0.15) {
                format!("{}word", profile.prefix)
            } else {
                FILLER[rng.random_range(0..FILLER.len())].to_owned()
            };
            words.push(w);
        }
        let mut edu = Edu::new(i + 1, words.join(" "));
        edu.sentence_id = Some(sentence);
        edu.paragraph_id = Some(paragraph);
        edus.push(edu);
    }
    ConstituentTree::new(doc_id, genre, edus, root).expect("generated tree is valid")
}

/// Partition of the `i`-th document of a genre: 3 of 5 train, 1 dev, 1 test.
pub fn partition_for(i: usize) -> Partition {
    match i % 5 {
        3 => Partition::Dev,
        4 => Partition::Test,
        _ => Partition::Train,
    }
}

/// `docs_per_genre` documents of 2..=`max_edus` EDUs for each genre.
pub fn toy_corpus(seed: u64, genres: &[&str], docs_per_genre: usize, max_edus: usize) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut docs = Vec::new();
    for genre in genres {
        for i in 0..docs_per_genre {
            let n = rng.random_range(2..=max_edus.max(2));
            let tree = random_tree(&mut rng, &format!("{genre}_{i:03}"), genre, n);
            docs.push(CorpusDocument {
                tree,
                partition: partition_for(i),
            });
        }
    }
    Corpus::from_documents(docs).expect("generated doc ids are unique")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binary::{binarize, debinarize};

    #[test]
    fn trees_are_valid_and_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..40 {
            let t = random_tree(&mut rng, "d", "news", n);
            assert_eq!(t.len(), n);
            assert!(debinarize(&binarize(&t)).unwrap().structurally_eq(&t));
        }
    }

    #[test]
    fn corpus_is_deterministic() {
        let a = toy_corpus(3, &["news", "bio"], 10, 12);
        let b = toy_corpus(3, &["news", "bio"], 10, 12);
        assert_eq!(a.len(), 20);
        for (x, y) in a.docs().iter().zip(b.docs()) {
            assert_eq!(x.tree, y.tree);
        }
        assert_eq!(a.partition(Partition::Dev).len(), 4);
    }
}
