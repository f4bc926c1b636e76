//! Original-Parseval span, nuclearity and relation scoring over binary trees,
//! and EDU boundary scoring.
//!
//! Units are the internal nodes of the binarized trees. A unit matches on S
//! when its span occurs in the other tree, on N when span and category match,
//! and on R when span, category and normalized label all match, so R-matches
//! are a subset of N-matches which are a subset of S-matches.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::binary::{BinaryNode, Unit};
use crate::error::{Error, Result};
use crate::relmap::{LabelMode, Scheme};
use crate::tree::{Edu, Nuclearity};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParsevalOptions {
    /// Count the whole-document span as a unit.
    pub include_root: bool,
    pub labels: LabelMode,
}

impl Default for ParsevalOptions {
    fn default() -> Self {
        ParsevalOptions {
            include_root: false,
            labels: LabelMode::Coarse(Scheme::Gum),
        }
    }
}

/// Matched and total unit counts for one document (or a pool of them).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ParsevalCounts {
    pub matched_s: usize,
    pub matched_n: usize,
    pub matched_r: usize,
    pub gold_units: usize,
    pub pred_units: usize,
}

impl std::ops::AddAssign for ParsevalCounts {
    fn add_assign(&mut self, o: Self) {
        self.matched_s += o.matched_s;
        self.matched_n += o.matched_n;
        self.matched_r += o.matched_r;
        self.gold_units += o.gold_units;
        self.pred_units += o.pred_units;
    }
}

fn f1(matched: usize, gold: usize, pred: usize) -> f64 {
    if gold + pred == 0 {
        // Nothing to find and nothing proposed.
        return 100.0;
    }
    200.0 * matched as f64 / (gold + pred) as f64
}

impl ParsevalCounts {
    pub fn scores(&self) -> ScoreTriple {
        ScoreTriple {
            s: f1(self.matched_s, self.gold_units, self.pred_units),
            n: f1(self.matched_n, self.gold_units, self.pred_units),
            r: f1(self.matched_r, self.gold_units, self.pred_units),
        }
    }
}

/// Micro F1 percentages.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ScoreTriple {
    pub s: f64,
    pub n: f64,
    pub r: f64,
}

impl ScoreTriple {
    pub fn mean<'a>(items: impl IntoIterator<Item = &'a ScoreTriple>) -> Option<ScoreTriple> {
        let mut sum = ScoreTriple::default();
        let mut k = 0usize;
        for t in items {
            sum.s += t.s;
            sum.n += t.n;
            sum.r += t.r;
            k += 1;
        }
        (k > 0).then(|| ScoreTriple {
            s: sum.s / k as f64,
            n: sum.n / k as f64,
            r: sum.r / k as f64,
        })
    }

    pub fn minus(&self, o: &ScoreTriple) -> ScoreTriple {
        ScoreTriple {
            s: self.s - o.s,
            n: self.n - o.n,
            r: self.r - o.r,
        }
    }
}

fn scored_units<'a>(root: &'a BinaryNode, opts: &ParsevalOptions) -> Vec<Unit<'a>> {
    let full = root.span();
    root.units()
        .into_iter()
        .filter(|u| opts.include_root || u.span != full)
        .collect()
}

/// Score a predicted tree against gold over the same EDU sequence.
pub fn parseval(gold: &BinaryNode, pred: &BinaryNode, opts: &ParsevalOptions) -> Result<ParsevalCounts> {
    if gold.span() != pred.span() {
        return Err(Error::LeafMismatch {
            gold: gold.leaf_count(),
            pred: pred.leaf_count(),
        });
    }
    let gold_units = scored_units(gold, opts);
    let pred_units = scored_units(pred, opts);

    // Spans are unique within a binary tree.
    let mut by_span: HashMap<(usize, usize), (Nuclearity, String)> = HashMap::with_capacity(pred_units.len());
    for u in &pred_units {
        by_span.insert(u.span, (u.category, opts.labels.normalize(u.label)?));
    }
    let mut counts = ParsevalCounts {
        gold_units: gold_units.len(),
        pred_units: pred_units.len(),
        ..Default::default()
    };
    for u in &gold_units {
        let Some((category, label)) = by_span.get(&u.span) else {
            continue;
        };
        counts.matched_s += 1;
        if *category == u.category {
            counts.matched_n += 1;
            if *label == opts.labels.normalize(u.label)? {
                counts.matched_r += 1;
            }
        }
    }
    Ok(counts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Averaging {
    Micro,
    /// Unweighted mean of per-genre micro scores.
    MacroByGenre,
}

impl std::str::FromStr for Averaging {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "micro" => Ok(Averaging::Micro),
            "macro" | "macro-by-genre" => Ok(Averaging::MacroByGenre),
            other => Err(Error::Parse(format!("unknown averaging mode `{other}`"))),
        }
    }
}

/// Aggregate `(genre, counts)` pairs.
pub fn aggregate<'a>(
    docs: impl IntoIterator<Item = (&'a str, ParsevalCounts)>,
    mode: Averaging,
) -> Result<ScoreTriple> {
    let mut by_genre: BTreeMap<&str, ParsevalCounts> = BTreeMap::new();
    let mut pooled = ParsevalCounts::default();
    let mut any = false;
    for (genre, c) in docs {
        *by_genre.entry(genre).or_default() += c;
        pooled += c;
        any = true;
    }
    if !any {
        return Err(Error::EmptyInput);
    }
    Ok(match mode {
        Averaging::Micro => pooled.scores(),
        Averaging::MacroByGenre => {
            let per: Vec<ScoreTriple> = by_genre.values().map(ParsevalCounts::scores).collect();
            ScoreTriple::mean(&per).expect("nonempty")
        }
    })
}

/// Precision, recall and F1 percentages.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct SegScore {
    pub p: f64,
    pub r: f64,
    pub f1: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SegCounts {
    pub matched: usize,
    pub gold: usize,
    pub pred: usize,
}

impl std::ops::AddAssign for SegCounts {
    fn add_assign(&mut self, o: Self) {
        self.matched += o.matched;
        self.gold += o.gold;
        self.pred += o.pred;
    }
}

impl SegCounts {
    pub fn score(&self) -> SegScore {
        let ratio = |num: usize, den: usize| {
            if den == 0 {
                100.0
            } else {
                100.0 * num as f64 / den as f64
            }
        };
        let p = ratio(self.matched, self.pred);
        let r = ratio(self.matched, self.gold);
        let f1 = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
        SegScore { p, r, f1 }
    }
}

/// Token indices (0-based) that open an EDU, excluding the first token.
pub fn edu_boundaries(edus: &[Edu]) -> (Vec<usize>, usize) {
    let mut boundaries = Vec::with_capacity(edus.len());
    let mut offset = 0;
    for e in edus {
        if offset > 0 {
            boundaries.push(offset);
        }
        offset += e.token_count();
    }
    (boundaries, offset)
}

/// Compare boundary sets of two segmentations of the same token sequence.
pub fn seg_counts(gold: &[Edu], pred: &[Edu]) -> Result<SegCounts> {
    let (g, gn) = edu_boundaries(gold);
    let (p, pn) = edu_boundaries(pred);
    if gn != pn {
        return Err(Error::TokenCountMismatch { gold: gn, pred: pn });
    }
    seg_counts_from_boundaries(&g, &p)
}

pub fn seg_counts_from_boundaries(gold: &[usize], pred: &[usize]) -> Result<SegCounts> {
    let gold: std::collections::BTreeSet<usize> = gold.iter().copied().collect();
    let matched = pred.iter().filter(|b| gold.contains(b)).count();
    Ok(SegCounts {
        matched,
        gold: gold.len(),
        pred: pred.len(),
    })
}

pub fn seg_f1(gold: &[Edu], pred: &[Edu]) -> Result<SegScore> {
    Ok(seg_counts(gold, pred)?.score())
}
