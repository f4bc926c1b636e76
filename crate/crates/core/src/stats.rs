//! Corpus statistics.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tree::{ConstituentTree, Nuclearity};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CorpusStats {
    pub docs: usize,
    pub tokens: usize,
    pub edus: usize,
    pub relation_instances: usize,
    pub label_count: usize,
}

/// Whitespace-token, EDU and relation-instance counts. Relation instances are
/// non-`span` attachments: each satellite, plus each multinuclear node once.
pub fn corpus_stats<'a>(trees: impl IntoIterator<Item = &'a ConstituentTree>) -> CorpusStats {
    let mut stats = CorpusStats::default();
    let mut labels = BTreeSet::new();
    for t in trees {
        stats.docs += 1;
        stats.tokens += t.token_count();
        stats.edus += t.len();
        for inst in t.relation_instances() {
            stats.relation_instances += 1;
            labels.insert(inst.label.to_owned());
        }
    }
    stats.label_count = labels.len();
    stats
}

/// Stats per genre plus a `total` row.
pub fn stats_by_genre<'a>(trees: impl IntoIterator<Item = &'a ConstituentTree>) -> BTreeMap<String, CorpusStats> {
    let mut groups: BTreeMap<String, Vec<&ConstituentTree>> = BTreeMap::new();
    let mut all = Vec::new();
    for t in trees {
        groups.entry(t.genre.clone()).or_default().push(t);
        all.push(t);
    }
    let mut out: BTreeMap<String, CorpusStats> = groups.into_iter().map(|(g, ts)| (g, corpus_stats(ts))).collect();
    out.insert("total".into(), corpus_stats(all));
    out
}

/// Proportions of NS, SN and NN among relation instances.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NuclearityDistribution {
    pub ns: f64,
    pub sn: f64,
    pub nn: f64,
    pub instances: usize,
}

impl NuclearityDistribution {
    pub fn get(&self, n: Nuclearity) -> f64 {
        match n {
            Nuclearity::NS => self.ns,
            Nuclearity::SN => self.sn,
            Nuclearity::NN => self.nn,
        }
    }
}

pub fn nuclearity_distribution<'a>(
    trees: impl IntoIterator<Item = &'a ConstituentTree>,
) -> Result<NuclearityDistribution> {
    let mut counts = [0usize; 3];
    for t in trees {
        for inst in t.relation_instances() {
            counts[inst.nuclearity as usize] += 1;
        }
    }
    let total: usize = counts.iter().sum();
    if total == 0 {
        return Err(Error::EmptyCorpus);
    }
    let p = |c: usize| c as f64 / total as f64;
    Ok(NuclearityDistribution {
        ns: p(counts[Nuclearity::NS as usize]),
        sn: p(counts[Nuclearity::SN as usize]),
        nn: p(counts[Nuclearity::NN as usize]),
        instances: total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{Edu, Node, Role, SPAN};

    fn ns_tree() -> ConstituentTree {
        let root = Node::internal(
            Role::Root,
            None,
            vec![
                Node::leaf(Role::Nucleus, Some(SPAN), 1),
                Node::leaf(Role::Satellite, Some("elaboration-additional"), 2),
            ],
        );
        ConstituentTree::new(
            "d",
            "news",
            vec![Edu::new(1, "The cat sat"), Edu::new(2, "on the mat .")],
            root,
        )
        .unwrap()
    }

    #[test]
    fn single_ns_tree() {
        let t = ns_tree();
        let d = nuclearity_distribution([&t]).unwrap();
        assert_eq!(d.ns, 1.0);
        assert_eq!(d.sn + d.nn, 0.0);
        let s = corpus_stats([&t]);
        assert_eq!(
            s,
            CorpusStats {
                docs: 1,
                tokens: 7,
                edus: 2,
                relation_instances: 1,
                label_count: 1
            }
        );
    }

    #[test]
    fn empty_inputs() {
        assert!(matches!(nuclearity_distribution([]), Err(Error::EmptyCorpus)));
        assert_eq!(corpus_stats([]), CorpusStats::default());
    }
}
