//! Builders for the standard cross-genre experiment layouts.

use std::collections::{BTreeMap, BTreeSet};

use rstkit::treebank::{Corpus, CorpusDocument, Partition};

use crate::config::{DevPolicy, ExperimentConfig, Regime, Selection, Target};
use crate::error::{Error, Result};
use crate::reference::FIXED_COHORTS;

/// Genres with less material than the others.
pub const GROWING_GENRES: [&str; 4] = ["conversation", "speech", "textbook", "vlog"];

const HELD_OUT: [Partition; 2] = [Partition::Dev, Partition::Test];

fn require_genre(corpus: &Corpus, genre: &str) -> Result<()> {
    if corpus.genres().contains(&genre) {
        Ok(())
    } else {
        Err(Error::UnknownGenre(genre.to_owned()))
    }
}

/// Everything in-domain: all train documents, dev for early stopping, and
/// each genre's test documents as a target. Five runs.
pub fn build_baseline(name: &str, corpus: &Corpus) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(
        "baseline",
        Regime::Plain,
        vec![Selection::new(name).partitions(&[Partition::Train])],
    )
    .with_runs(5);
    cfg.dev = DevPolicy::Sources {
        sources: vec![Selection::new(name).partitions(&[Partition::Dev])],
    };
    cfg.test = corpus
        .genres()
        .into_iter()
        .map(|g| Target {
            name: g.to_owned(),
            selection: Selection::new(name).genres(&[g]).partitions(&[Partition::Test]),
        })
        .collect();
    cfg
}

/// Train on every other genre; test on the held-out genre's dev and test
/// documents, which no model uses for early stopping.
pub fn build_ova(name: &str, corpus: &Corpus, held_out: &str) -> Result<ExperimentConfig> {
    require_genre(corpus, held_out)?;
    let others = [held_out];
    let mut cfg = ExperimentConfig::new(
        format!("ova-{held_out}"),
        Regime::Plain,
        vec![Selection::new(name).exclude(&others).partitions(&[Partition::Train])],
    );
    cfg.dev = DevPolicy::Sources {
        sources: vec![Selection::new(name).exclude(&others).partitions(&[Partition::Dev])],
    };
    cfg.test = vec![Target {
        name: held_out.to_owned(),
        selection: Selection::new(name).genres(&others).partitions(&HELD_OUT),
    }];
    Ok(cfg)
}

/// Train on the large genres, test on each growing genre present.
pub fn build_all_large(name: &str, corpus: &Corpus) -> ExperimentConfig {
    let genres = corpus.genres();
    let growing: Vec<&str> = GROWING_GENRES.into_iter().filter(|g| genres.contains(g)).collect();
    if growing.is_empty() {
        log::warn!("corpus `{name}` has no growing genres; the experiment has no test targets");
    }
    let mut cfg = ExperimentConfig::new(
        "all-large",
        Regime::Plain,
        vec![Selection::new(name).exclude(&growing).partitions(&[Partition::Train])],
    );
    cfg.dev = DevPolicy::Sources {
        sources: vec![Selection::new(name).exclude(&growing).partitions(&[Partition::Dev])],
    };
    cfg.test = growing
        .iter()
        .map(|g| Target {
            name: (*g).to_owned(),
            selection: Selection::new(name).genres(&[g]).partitions(&HELD_OUT),
        })
        .collect();
    cfg
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohortSpec {
    pub name: String,
    /// `(genre, document count)`.
    pub rows: Vec<(String, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohortPlan {
    pub cohorts: Vec<CohortSpec>,
    /// Largest allowed EDU difference between any two cohorts.
    pub tolerance: usize,
}

impl Default for CohortPlan {
    /// The three published cohorts.
    fn default() -> Self {
        let mut cohorts: Vec<CohortSpec> = Vec::new();
        for (c, g, docs, _) in FIXED_COHORTS {
            match cohorts.iter_mut().find(|x| x.name == c) {
                Some(x) => x.rows.push((g.to_owned(), docs)),
                None => cohorts.push(CohortSpec {
                    name: c.to_owned(),
                    rows: vec![(g.to_owned(), docs)],
                }),
            }
        }
        CohortPlan { cohorts, tolerance: 50 }
    }
}

/// The first `k` documents of each genre in doc-id order, from all
/// partitions.
pub fn select_cohort<'a>(corpus: &'a Corpus, spec: &CohortSpec) -> Result<Vec<&'a CorpusDocument>> {
    let mut out = Vec::new();
    for (genre, k) in &spec.rows {
        require_genre(corpus, genre)?;
        let docs: Vec<&CorpusDocument> = corpus.docs().iter().filter(|d| d.genre() == genre).take(*k).collect();
        if docs.len() < *k {
            return Err(Error::InfeasibleBudget(format!(
                "cohort {} wants {k} {genre} documents, the corpus has {}",
                spec.name,
                docs.len()
            )));
        }
        out.extend(docs);
    }
    Ok(out)
}

/// One experiment per cohort. All cohorts share one test set: the dev and
/// test documents of the genres no cohort uses.
pub fn build_fixed_cohorts(name: &str, corpus: &Corpus, plan: &CohortPlan) -> Result<Vec<ExperimentConfig>> {
    let selected: Vec<Vec<&CorpusDocument>> = plan
        .cohorts
        .iter()
        .map(|c| select_cohort(corpus, c))
        .collect::<Result<_>>()?;
    let totals: BTreeMap<&str, usize> = plan
        .cohorts
        .iter()
        .zip(&selected)
        .map(|(c, docs)| (c.name.as_str(), docs.iter().map(|d| d.tree.len()).sum()))
        .collect();
    if let (Some(lo), Some(hi)) = (totals.values().min(), totals.values().max()) {
        if hi - lo > plan.tolerance {
            return Err(Error::InfeasibleBudget(format!(
                "cohort EDU totals {totals:?} differ by {} > {}",
                hi - lo,
                plan.tolerance
            )));
        }
    }

    let used: BTreeSet<&str> = plan
        .cohorts
        .iter()
        .flat_map(|c| c.rows.iter().map(|r| r.0.as_str()))
        .collect();
    let test: Vec<Target> = corpus
        .genres()
        .into_iter()
        .filter(|g| !used.contains(g))
        .map(|g| Target {
            name: g.to_owned(),
            selection: Selection::new(name).genres(&[g]).partitions(&HELD_OUT),
        })
        .collect();

    Ok(plan
        .cohorts
        .iter()
        .zip(selected)
        .map(|(c, docs)| {
            let mut sel = Selection::new(name);
            sel.docs = docs.iter().map(|d| d.doc_id().to_owned()).collect();
            let mut cfg = ExperimentConfig::new(format!("cohort-{}", c.name), Regime::Plain, vec![sel]);
            cfg.dev = DevPolicy::Stratified;
            cfg.test = test.clone();
            cfg
        })
        .collect())
}
