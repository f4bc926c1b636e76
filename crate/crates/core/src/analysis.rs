//! Error analysis over dependency conversions of gold and predicted trees.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::binary::BinaryNode;
use crate::depconv::cdu;
use crate::error::{Error, Result};
use crate::relmap::LabelMode;
use crate::tree::Nuclearity;
use crate::treebank::{DepDocument, ROOT_LABEL};

/// Which relation instances enter a confusion matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AttachmentFilter {
    /// Only EDUs whose predicted head equals the gold head.
    #[default]
    CorrectAttachment,
    All,
}

impl std::str::FromStr for AttachmentFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "correct-attachment-only" | "correct" => Ok(AttachmentFilter::CorrectAttachment),
            "all" => Ok(AttachmentFilter::All),
            other => Err(Error::Parse(format!("unknown filter `{other}`"))),
        }
    }
}

/// Class of a dependency label; the root arc keeps the `root` label.
pub fn arc_class(label: &str, labels: LabelMode) -> Result<String> {
    if label == ROOT_LABEL {
        Ok(ROOT_LABEL.to_owned())
    } else {
        labels.normalize(label)
    }
}

fn check_pair(gold: &DepDocument, pred: &DepDocument) -> Result<()> {
    if gold.doc_id != pred.doc_id {
        return Err(Error::DocMismatch(format!("`{}` vs `{}`", gold.doc_id, pred.doc_id)));
    }
    if gold.len() != pred.len() {
        return Err(Error::DocMismatch(format!(
            "`{}` has {} gold and {} predicted EDUs",
            gold.doc_id,
            gold.len(),
            pred.len()
        )));
    }
    Ok(())
}

fn pairs<'a>(
    gold: &'a [DepDocument],
    pred: &'a [DepDocument],
) -> Result<impl Iterator<Item = (&'a DepDocument, &'a DepDocument)>> {
    if gold.len() != pred.len() {
        return Err(Error::DocMismatch(format!(
            "{} gold vs {} predicted documents",
            gold.len(),
            pred.len()
        )));
    }
    for (g, p) in gold.iter().zip(pred) {
        check_pair(g, p)?;
    }
    Ok(gold.iter().zip(pred))
}

/// Gold class by predicted class counts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub counts: BTreeMap<String, BTreeMap<String, usize>>,
}

impl ConfusionMatrix {
    pub fn get(&self, gold: &str, pred: &str) -> usize {
        self.counts.get(gold).and_then(|r| r.get(pred)).copied().unwrap_or(0)
    }

    /// Union of gold and predicted classes, sorted.
    pub fn labels(&self) -> Vec<&str> {
        let mut set = BTreeSet::new();
        for (g, row) in &self.counts {
            set.insert(g.as_str());
            set.extend(row.keys().map(String::as_str));
        }
        set.into_iter().collect()
    }

    pub fn row_total(&self, gold: &str) -> usize {
        self.counts.get(gold).map(|r| r.values().sum()).unwrap_or(0)
    }

    pub fn off_diagonal(&self) -> usize {
        self.counts
            .iter()
            .flat_map(|(g, row)| row.iter().filter(move |(p, _)| *p != g).map(|(_, c)| *c))
            .sum()
    }

    /// Square CSV, gold classes down, predicted classes across.
    pub fn to_csv(&self) -> String {
        let labels = self.labels();
        let mut out = String::from("gold\\pred");
        for l in &labels {
            let _ = write!(out, ",{l}");
        }
        out.push('\n');
        for g in &labels {
            out.push_str(g);
            for p in &labels {
                let _ = write!(out, ",{}", self.get(g, p));
            }
            out.push('\n');
        }
        out
    }

    /// Heatmap data: axis labels plus a row-major value matrix, as JSON.
    pub fn to_heatmap_json(&self) -> String {
        #[derive(Serialize)]
        struct Heatmap<'a> {
            x_labels: &'a [&'a str],
            y_labels: &'a [&'a str],
            values: Vec<Vec<usize>>,
        }
        let labels = self.labels();
        let values = labels
            .iter()
            .map(|g| labels.iter().map(|p| self.get(g, p)).collect())
            .collect();
        serde_json::to_string_pretty(&Heatmap {
            x_labels: &labels,
            y_labels: &labels,
            values,
        })
        .expect("heatmap serializes")
    }
}

pub fn confusion(
    gold: &[DepDocument],
    pred: &[DepDocument],
    labels: LabelMode,
    filter: AttachmentFilter,
) -> Result<ConfusionMatrix> {
    let mut m = ConfusionMatrix::default();
    for (g, p) in pairs(gold, pred)? {
        for (ga, pa) in g.arcs.iter().zip(&p.arcs) {
            if filter == AttachmentFilter::CorrectAttachment && ga.head != pa.head {
                continue;
            }
            let gc = arc_class(&ga.label, labels)?;
            let pc = arc_class(&pa.label, labels)?;
            *m.counts.entry(gc).or_default().entry(pc).or_default() += 1;
        }
    }
    Ok(m)
}

/// Share of gold instances per class with correct head and class.
pub fn per_class_accuracy(
    gold: &[DepDocument],
    pred: &[DepDocument],
    labels: LabelMode,
) -> Result<BTreeMap<String, f64>> {
    let mut tally: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for (g, p) in pairs(gold, pred)? {
        for (ga, pa) in g.arcs.iter().zip(&p.arcs) {
            let gc = arc_class(&ga.label, labels)?;
            let correct = ga.head == pa.head && arc_class(&pa.label, labels)? == gc;
            let e = tally.entry(gc).or_default();
            e.1 += 1;
            if correct {
                e.0 += 1;
            }
        }
    }
    Ok(tally
        .into_iter()
        .map(|(c, (ok, n))| (c, ok as f64 / n as f64))
        .collect())
}

/// Per-class OOD accuracies reported for GUM, for reference only.
pub const REFERENCE_CLASS_ACCURACY: [(&str, f64); 16] = [
    ("Attribution", 0.875),
    ("Purpose", 0.861),
    ("same-unit", 0.814),
    ("Contingency", 0.794),
    ("Elaboration", 0.666),
    ("Joint", 0.654),
    ("Topic", 0.574),
    ("Mode", 0.504),
    ("Context", 0.471),
    ("Adversative", 0.467),
    ("Organization", 0.463),
    ("Explanation", 0.431),
    ("Causal", 0.384),
    ("Evaluation", 0.362),
    ("Restatement", 0.308),
    ("root", 0.208),
];

/// Fraction of documents whose predicted central unit is the gold one.
pub fn cdu_accuracy(gold: &[DepDocument], pred: &[DepDocument]) -> Result<f64> {
    let mut hits = 0usize;
    let mut n = 0usize;
    for (g, p) in pairs(gold, pred)? {
        n += 1;
        if cdu(g)? == cdu(p)? {
            hits += 1;
        }
    }
    Ok(if n == 0 { 0.0 } else { hits as f64 / n as f64 })
}

/// Counts per (row, column), e.g. genre by gold class.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ContingencyTable {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub counts: Vec<Vec<f64>>,
}

impl ContingencyTable {
    pub fn from_counts(counts: &BTreeMap<String, BTreeMap<String, usize>>) -> Self {
        let rows: Vec<String> = counts.keys().cloned().collect();
        let cols: Vec<String> = counts
            .values()
            .flat_map(|r| r.keys().cloned())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let counts = rows
            .iter()
            .map(|r| {
                cols.iter()
                    .map(|c| counts[r].get(c).copied().unwrap_or(0) as f64)
                    .collect()
            })
            .collect();
        ContingencyTable { rows, cols, counts }
    }
}

/// Which gold instances count towards the per-genre error table.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ErrorCount {
    /// Instances with a wrong head or wrong class.
    #[default]
    Misclassified,
    All,
}

impl std::str::FromStr for ErrorCount {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "misclassified" | "errors" => Ok(ErrorCount::Misclassified),
            "all" => Ok(ErrorCount::All),
            other => Err(Error::Parse(format!("unknown error count `{other}`"))),
        }
    }
}

/// Genre by gold class table of error counts from `(genre, gold, pred)` triples.
pub fn error_table<'a>(
    docs: impl IntoIterator<Item = (&'a str, &'a DepDocument, &'a DepDocument)>,
    labels: LabelMode,
    count: ErrorCount,
) -> Result<ContingencyTable> {
    let mut counts: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
    for (genre, g, p) in docs {
        check_pair(g, p)?;
        let row = counts.entry(genre.to_owned()).or_default();
        for (ga, pa) in g.arcs.iter().zip(&p.arcs) {
            let gc = arc_class(&ga.label, labels)?;
            let wrong = ga.head != pa.head || arc_class(&pa.label, labels)? != gc;
            if wrong || count == ErrorCount::All {
                *row.entry(gc).or_default() += 1;
            }
        }
    }
    Ok(ContingencyTable::from_counts(&counts))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Residuals {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub expected: Vec<Vec<f64>>,
    /// `(observed - expected) / sqrt(expected)`.
    pub residuals: Vec<Vec<f64>>,
}

impl Residuals {
    /// Column with the largest absolute residual per row.
    pub fn max_abs_by_row(&self) -> Vec<(&str, &str, f64)> {
        self.rows
            .iter()
            .zip(&self.residuals)
            .map(|(r, vals)| {
                let (j, v) =
                    vals.iter().enumerate().fold(
                        (0, 0.0f64),
                        |best, (j, v)| if v.abs() > best.1 { (j, v.abs()) } else { best },
                    );
                (r.as_str(), self.cols[j].as_str(), v)
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("row");
        for c in &self.cols {
            let _ = write!(out, ",{c}");
        }
        out.push('\n');
        for (r, vals) in self.rows.iter().zip(&self.residuals) {
            out.push_str(r);
            for v in vals {
                let _ = write!(out, ",{v:.6}");
            }
            out.push('\n');
        }
        out
    }
}

/// Pearson residuals of a contingency table under independence.
pub fn chi2_residuals(table: &ContingencyTable) -> Result<Residuals> {
    let row_totals: Vec<f64> = table.counts.iter().map(|r| r.iter().sum()).collect();
    let col_totals: Vec<f64> = (0..table.cols.len())
        .map(|j| table.counts.iter().map(|r| r[j]).sum())
        .collect();
    if let Some(i) = row_totals.iter().position(|&t| t <= 0.0) {
        return Err(Error::ZeroMargin(format!("row `{}`", table.rows[i])));
    }
    if let Some(j) = col_totals.iter().position(|&t| t <= 0.0) {
        return Err(Error::ZeroMargin(format!("column `{}`", table.cols[j])));
    }
    if table.counts.iter().flatten().any(|&c| c < 0.0) {
        return Err(Error::Parse("negative count in contingency table".into()));
    }
    let grand: f64 = row_totals.iter().sum();
    let mut expected = Vec::with_capacity(table.rows.len());
    let mut residuals = Vec::with_capacity(table.rows.len());
    for (i, row) in table.counts.iter().enumerate() {
        let e: Vec<f64> = col_totals.iter().map(|ct| row_totals[i] * ct / grand).collect();
        residuals.push(row.iter().zip(&e).map(|(o, e)| (o - e) / e.sqrt()).collect());
        expected.push(e);
    }
    Ok(Residuals {
        rows: table.rows.clone(),
        cols: table.cols.clone(),
        expected,
        residuals,
    })
}

/// Maximum absolute error residual per genre reported for GUM, for reference.
#[allow(clippy::approx_constant)]
pub const REFERENCE_MAX_RESIDUALS: [(&str, &str, f64); 12] = [
    ("textbook", "Context", 3.64),
    ("speech", "Explanation", 3.14),
    ("reddit", "Explanation", 3.02),
    ("fiction", "Evaluation", 2.59),
    ("bio", "Causal", 2.26),
    ("vlog", "Causal", 2.23),
    ("conversation", "Organization", 2.14),
    ("voyage", "Context", 2.13),
    ("academic", "Organization", 1.84),
    ("how-to", "Organization", 1.62),
    ("news", "Explanation", 1.38),
    ("interview", "Evaluation", 0.89),
];

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct CategoryScore {
    pub gold: usize,
    pub pred: usize,
    pub matched: usize,
    pub f1: f64,
}

/// Span-and-category F1 per nuclearity category. Categories without gold
/// units are omitted.
pub fn branching_report<'a>(
    pairs: impl IntoIterator<Item = (&'a BinaryNode, &'a BinaryNode)>,
    include_root: bool,
) -> Result<BTreeMap<Nuclearity, CategoryScore>> {
    let mut out: BTreeMap<Nuclearity, CategoryScore> = BTreeMap::new();
    for (gold, pred) in pairs {
        if gold.span() != pred.span() {
            return Err(Error::LeafMismatch {
                gold: gold.leaf_count(),
                pred: pred.leaf_count(),
            });
        }
        let full = gold.span();
        let keep = |u: &crate::binary::Unit<'_>| include_root || u.span != full;
        let pred_units: BTreeMap<(usize, usize), Nuclearity> = pred
            .units()
            .into_iter()
            .filter(keep)
            .map(|u| (u.span, u.category))
            .collect();
        for u in gold.units().into_iter().filter(keep) {
            let e = out.entry(u.category).or_default();
            e.gold += 1;
            if pred_units.get(&u.span) == Some(&u.category) {
                e.matched += 1;
            }
        }
        for c in pred_units.values() {
            out.entry(*c).or_default().pred += 1;
        }
    }
    out.retain(|_, s| s.gold > 0);
    for s in out.values_mut() {
        s.f1 = 200.0 * s.matched as f64 / (s.gold + s.pred) as f64;
    }
    Ok(out)
}
