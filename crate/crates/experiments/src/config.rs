//! Experiment configuration files (TOML).

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rstkit::relmap::{LabelMode, Scheme};
use rstkit::treebank::{Corpus, CorpusDocument, Partition};
use rstkit_parser::FeatureConfig;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Plain,
    /// Several sources, possibly from different corpora, in one inventory.
    Concat,
    /// Window-tagger label predictions as features.
    FlairLabel,
    /// Base-parser dependency labels as features.
    SrLabel,
    /// Base-parser attachment direction and distance as features.
    SrGraph,
    /// Base parser weights as the starting point.
    WarmStart,
}

impl Regime {
    pub fn needs_base(self) -> bool {
        !matches!(self, Regime::Plain | Regime::Concat)
    }
}

/// A set of documents from one named corpus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Selection {
    pub corpus: String,
    /// Keep only these genres; empty keeps all.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub genres: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub exclude_genres: Vec<String>,
    /// Empty keeps all partitions.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub partitions: Vec<Partition>,
    /// Explicit document ids; when given, the other filters are ignored.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub docs: Vec<String>,
    /// Scheme of the labels in the source files.
    #[serde(default = "default_scheme")]
    pub scheme: Scheme,
}

fn default_scheme() -> Scheme {
    Scheme::Gum
}

impl Selection {
    pub fn new(corpus: impl Into<String>) -> Self {
        Selection {
            corpus: corpus.into(),
            genres: Vec::new(),
            exclude_genres: Vec::new(),
            partitions: Vec::new(),
            docs: Vec::new(),
            scheme: Scheme::Gum,
        }
    }

    pub fn partitions(mut self, p: &[Partition]) -> Self {
        self.partitions = p.to_vec();
        self
    }

    pub fn genres<S: AsRef<str>>(mut self, g: &[S]) -> Self {
        self.genres = g.iter().map(|s| s.as_ref().to_owned()).collect();
        self
    }

    pub fn exclude<S: AsRef<str>>(mut self, g: &[S]) -> Self {
        self.exclude_genres = g.iter().map(|s| s.as_ref().to_owned()).collect();
        self
    }

    /// Matching documents in doc-id order.
    pub fn resolve<'a>(&self, corpora: &'a BTreeMap<String, Corpus>) -> Result<Vec<&'a CorpusDocument>> {
        let corpus = corpora
            .get(&self.corpus)
            .ok_or_else(|| Error::UnknownCorpus(self.corpus.clone()))?;
        if !self.docs.is_empty() {
            let mut ids: Vec<&String> = self.docs.iter().collect();
            ids.sort();
            return ids
                .into_iter()
                .map(|id| {
                    corpus
                        .get(id)
                        .ok_or_else(|| Error::Config(format!("document `{id}` is not in corpus `{}`", self.corpus)))
                })
                .collect();
        }
        let present: BTreeSet<&str> = corpus.genres().into_iter().collect();
        for g in self.genres.iter().chain(&self.exclude_genres) {
            if !present.contains(g.as_str()) {
                return Err(Error::UnknownGenre(g.clone()));
            }
        }
        Ok(corpus
            .docs()
            .iter()
            .filter(|d| self.genres.is_empty() || self.genres.iter().any(|g| g == d.genre()))
            .filter(|d| !self.exclude_genres.iter().any(|g| g == d.genre()))
            .filter(|d| self.partitions.is_empty() || self.partitions.contains(&d.partition))
            .collect())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "lowercase", deny_unknown_fields)]
pub enum DevPolicy {
    /// No early stopping.
    #[default]
    None,
    /// Every 10th training document by EDU count.
    Stratified,
    Sources {
        sources: Vec<Selection>,
    },
}

/// A named test set, scored as one pool.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Target {
    pub name: String,
    #[serde(flatten)]
    pub selection: Selection,
}

/// The model a stacking or warm-start regime builds on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseConfig {
    pub train: Vec<Selection>,
    #[serde(default)]
    pub dev: DevPolicy,
    /// Label classes of the base model; ignored for warm-start, which must
    /// share the main inventory.
    #[serde(default = "default_labels", with = "label_mode")]
    pub labels: LabelMode,
}

fn default_labels() -> LabelMode {
    LabelMode::Coarse(Scheme::Gum)
}

fn default_runs() -> usize {
    3
}

fn default_seeds() -> Vec<u64> {
    vec![1, 2, 3]
}

fn default_epochs() -> usize {
    20
}

fn default_patience() -> usize {
    5
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub regime: Regime,
    pub train: Vec<Selection>,
    #[serde(default)]
    pub dev: DevPolicy,
    #[serde(default)]
    pub test: Vec<Target>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<BaseConfig>,
    #[serde(default = "default_labels", with = "label_mode")]
    pub labels: LabelMode,
    /// Stacking is set by the regime; a value here is overridden.
    #[serde(default)]
    pub features: FeatureConfig,
    #[serde(default = "default_epochs")]
    pub max_epochs: usize,
    #[serde(default = "default_patience")]
    pub patience: usize,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
}

impl ExperimentConfig {
    pub fn new(name: impl Into<String>, regime: Regime, train: Vec<Selection>) -> Self {
        ExperimentConfig {
            name: name.into(),
            regime,
            train,
            dev: DevPolicy::None,
            test: Vec::new(),
            base: None,
            labels: default_labels(),
            features: FeatureConfig::default(),
            max_epochs: default_epochs(),
            patience: default_patience(),
            runs: default_runs(),
            seeds: default_seeds(),
        }
    }

    /// Use `runs` runs with seeds 1..=runs.
    pub fn with_runs(mut self, runs: usize) -> Self {
        self.runs = runs;
        self.seeds = (1..=runs as u64).collect();
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.name.is_empty() || self.name.contains(['/', '\\']) || self.name == "." || self.name == ".." {
            return bad(format!("`{}` is not a usable experiment name", self.name));
        }
        if self.train.is_empty() {
            return bad("no training sources".into());
        }
        if self.runs == 0 || self.seeds.len() != self.runs {
            return bad(format!("{} runs but {} seeds", self.runs, self.seeds.len()));
        }
        if self.seeds.iter().collect::<BTreeSet<_>>().len() != self.seeds.len() {
            return bad("seeds repeat".into());
        }
        if self.regime.needs_base() && self.base.is_none() {
            return bad(format!("regime {:?} needs a [base] section", self.regime));
        }
        let mut names = BTreeSet::new();
        for t in &self.test {
            if !names.insert(t.name.as_str()) {
                return bad(format!("test target `{}` repeats", t.name));
            }
        }
        Ok(())
    }

    pub fn from_toml(content: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(content).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
    }
}

/// Fail when any test document is also used for training or early stopping,
/// including by the base model.
pub fn check_no_leakage(cfg: &ExperimentConfig, corpora: &BTreeMap<String, Corpus>) -> Result<()> {
    let mut seen: BTreeSet<(String, String)> = BTreeSet::new();
    let mut add = |sels: &[Selection]| -> Result<()> {
        for s in sels {
            for d in s.resolve(corpora)? {
                seen.insert((s.corpus.clone(), d.doc_id().to_owned()));
            }
        }
        Ok(())
    };
    add(&cfg.train)?;
    if let DevPolicy::Sources { sources } = &cfg.dev {
        add(sources)?;
    }
    if let Some(b) = &cfg.base {
        add(&b.train)?;
        if let DevPolicy::Sources { sources } = &b.dev {
            add(sources)?;
        }
    }
    for t in &cfg.test {
        for d in t.selection.resolve(corpora)? {
            if seen.contains(&(t.selection.corpus.clone(), d.doc_id().to_owned())) {
                return Err(Error::Leakage {
                    corpus: t.selection.corpus.clone(),
                    doc_id: d.doc_id().to_owned(),
                });
            }
        }
    }
    Ok(())
}

mod label_mode {
    use rstkit::relmap::LabelMode;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &LabelMode, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(m)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<LabelMode, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}
