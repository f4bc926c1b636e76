//! Multi-class averaged perceptron over string features.
//!
//! Scores sum weights in feature order, so identical inputs give bitwise
//! identical scores. Ties go to the lowest class index; classes are kept
//! sorted, so that is the lexicographically smallest class id.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

/// Weights used for prediction.
#[derive(Clone, Debug, Default)]
pub struct Weights {
    classes: Vec<String>,
    index: HashMap<String, usize>,
    /// Row-major: feature row times class count.
    values: Vec<f64>,
}

impl Weights {
    pub fn new(mut classes: Vec<String>) -> Self {
        classes.sort();
        classes.dedup();
        Weights {
            classes,
            index: HashMap::new(),
            values: Vec::new(),
        }
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn class_index(&self, class: &str) -> Option<usize> {
        self.classes.binary_search_by(|c| c.as_str().cmp(class)).ok()
    }

    pub fn feature_count(&self) -> usize {
        self.index.len()
    }

    pub fn knows(&self, feature: &str) -> bool {
        self.index.contains_key(feature)
    }

    pub fn scores(&self, features: &[String]) -> Vec<f64> {
        let k = self.classes.len();
        let mut out = vec![0.0; k];
        for f in features {
            if let Some(&row) = self.index.get(f) {
                for (o, w) in out.iter_mut().zip(&self.values[row * k..(row + 1) * k]) {
                    *o += w;
                }
            }
        }
        out
    }

    /// Best class among those `allowed`; `None` when nothing is allowed.
    pub fn best(&self, features: &[String], allowed: impl Fn(usize) -> bool) -> Option<usize> {
        let scores = self.scores(features);
        let mut best: Option<(usize, f64)> = None;
        for (c, s) in scores.into_iter().enumerate() {
            if allowed(c) && best.is_none_or(|(_, b)| s > b) {
                best = Some((c, s));
            }
        }
        best.map(|(c, _)| c)
    }

    fn row(&mut self, feature: &str) -> usize {
        if let Some(&r) = self.index.get(feature) {
            return r;
        }
        let r = self.index.len();
        self.index.insert(feature.to_owned(), r);
        self.values.extend(std::iter::repeat_n(0.0, self.classes.len()));
        r
    }

    /// Same weights over a class set extended with `extra`.
    pub fn with_classes(&self, extra: impl IntoIterator<Item = String>) -> Weights {
        let mut classes = self.classes.clone();
        classes.extend(extra);
        let mut out = Weights::new(classes);
        let map: Vec<usize> = self
            .classes
            .iter()
            .map(|c| out.class_index(c).expect("superset"))
            .collect();
        let k = self.classes.len();
        for (f, row) in self.sorted_rows() {
            let r = out.row(f);
            let kk = out.classes.len();
            for (c, &to) in map.iter().enumerate() {
                out.values[r * kk + to] = self.values[row * k + c];
            }
        }
        out
    }

    fn sorted_rows(&self) -> Vec<(&str, usize)> {
        let mut rows: Vec<(&str, usize)> = self.index.iter().map(|(f, &r)| (f.as_str(), r)).collect();
        rows.sort_unstable();
        rows
    }

    pub fn to_stored(&self) -> StoredWeights {
        let k = self.classes.len();
        let rows = self
            .sorted_rows()
            .into_iter()
            .filter_map(|(f, r)| {
                let w = &self.values[r * k..(r + 1) * k];
                w.iter().any(|x| *x != 0.0).then(|| (f.to_owned(), w.to_vec()))
            })
            .collect();
        StoredWeights {
            classes: self.classes.clone(),
            rows,
        }
    }

    pub fn from_stored(s: StoredWeights) -> Result<Weights, String> {
        let mut sorted = s.classes.clone();
        sorted.sort();
        sorted.dedup();
        if sorted != s.classes {
            return Err("classes must be sorted and unique".into());
        }
        let mut w = Weights::new(s.classes);
        let k = w.classes.len();
        for (f, vals) in s.rows {
            if vals.len() != k {
                return Err(format!("feature `{f}` has {} weights, expected {k}", vals.len()));
            }
            let r = w.row(&f);
            w.values[r * k..(r + 1) * k].copy_from_slice(&vals);
        }
        Ok(w)
    }
}

/// Equal when every feature scores every class the same.
impl PartialEq for Weights {
    fn eq(&self, other: &Self) -> bool {
        self.to_stored() == other.to_stored()
    }
}

/// Serialized form with rows ordered by feature name; all-zero rows are
/// dropped.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StoredWeights {
    pub classes: Vec<String>,
    pub rows: BTreeMap<String, Vec<f64>>,
}

/// Training state: current weights plus running sums for averaging.
#[derive(Clone, Debug)]
pub struct Perceptron {
    current: Weights,
    totals: Vec<f64>,
    stamps: Vec<u64>,
    step: u64,
}

impl Perceptron {
    pub fn new(initial: Weights) -> Self {
        let n = initial.values.len();
        Perceptron {
            current: initial,
            totals: vec![0.0; n],
            stamps: vec![0; n],
            step: 0,
        }
    }

    pub fn weights(&self) -> &Weights {
        &self.current
    }

    /// Advance the averaging clock by one training instance.
    pub fn tick(&mut self) {
        self.step += 1;
    }

    fn bump(&mut self, i: usize, delta: f64) {
        self.totals[i] += (self.step - self.stamps[i]) as f64 * self.current.values[i];
        self.stamps[i] = self.step;
        self.current.values[i] += delta;
    }

    pub fn update(&mut self, features: &[String], gold: usize, pred: usize) {
        if gold == pred {
            return;
        }
        let k = self.current.classes.len();
        for f in features {
            let r = self.current.row(f);
            if self.totals.len() < self.current.values.len() {
                self.totals.resize(self.current.values.len(), 0.0);
                self.stamps.resize(self.current.values.len(), self.step);
            }
            self.bump(r * k + gold, 1.0);
            self.bump(r * k + pred, -1.0);
        }
    }

    /// Averaged weights; the current weights before any step.
    pub fn averaged(&self) -> Weights {
        if self.step == 0 {
            return self.current.clone();
        }
        let mut out = self.current.clone();
        for (i, v) in out.values.iter_mut().enumerate() {
            let total = self.totals[i] + (self.step - self.stamps[i]) as f64 * self.current.values[i];
            *v = total / self.step as f64;
        }
        out
    }
}
