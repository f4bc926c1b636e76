//! Sparse binary features over the top of the stack and the queue front.

use rstkit::binary::BinaryNode;
use rstkit::Edu;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::transition::ParserState;

/// Which stacked predictions, if any, become features.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stacking {
    #[default]
    None,
    /// Predicted dependency label of each EDU.
    Label,
    /// Predicted attachment direction and distance of each EDU.
    Graph,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct FeatureConfig {
    pub organizational: bool,
    pub conjunctions: bool,
    pub stacking: Stacking,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            organizational: true,
            conjunctions: true,
            stacking: Stacking::None,
        }
    }
}

impl FeatureConfig {
    /// Hex digest identifying this configuration in model files.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        Sha256::digest(json.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Head precedes the EDU.
    Left,
    /// Head follows the EDU.
    Right,
    Root,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Left => "left",
            Direction::Right => "right",
            Direction::Root => "root",
        }
    }
}

/// Per-EDU predictions from another model.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotation {
    pub label: Option<String>,
    pub direction: Option<Direction>,
    pub distance: Option<String>,
}

/// Attachment distance bucket; 0 is reserved for the root.
pub fn distance_bucket(d: usize) -> &'static str {
    match d {
        0 => "0",
        1 => "1",
        2 => "2",
        3..=5 => "3-5",
        6..=10 => "6-10",
        _ => ">10",
    }
}

pub fn token_bucket(n: usize) -> &'static str {
    match n {
        0 | 1 => "1",
        2..=3 => "2-3",
        4..=7 => "4-7",
        8..=15 => "8-15",
        _ => "16+",
    }
}

pub fn edu_bucket(n: usize) -> &'static str {
    match n {
        0 | 1 => "1",
        2 => "2",
        3..=4 => "3-4",
        5..=8 => "5-8",
        _ => "9+",
    }
}

/// A document as the parser sees it.
#[derive(Clone, Copy, Debug)]
pub struct DocView<'a> {
    pub edus: &'a [Edu],
    /// Empty, or one entry per EDU.
    pub annotations: &'a [Annotation],
}

impl<'a> DocView<'a> {
    pub fn new(edus: &'a [Edu]) -> Self {
        DocView { edus, annotations: &[] }
    }

    fn edu(&self, i: usize) -> &'a Edu {
        &self.edus[i - 1]
    }

    fn annotation(&self, i: usize) -> Option<&'a Annotation> {
        self.annotations.get(i - 1)
    }

    fn starts_paragraph(&self, i: usize) -> Option<bool> {
        let p = self.edu(i).paragraph_id?;
        Some(i == 1 || self.edu(i - 1).paragraph_id != Some(p))
    }
}

struct Item {
    first: String,
    last: String,
    tokens: usize,
    edus: usize,
    span: (usize, usize),
    head: usize,
}

fn lower_first(e: &Edu) -> String {
    e.tokens().next().unwrap_or("").to_lowercase()
}

fn lower_last(e: &Edu) -> String {
    e.tokens().last().unwrap_or("").to_lowercase()
}

fn stack_item(doc: &DocView<'_>, node: &BinaryNode) -> Item {
    let (a, b) = node.span();
    Item {
        first: lower_first(doc.edu(a)),
        last: lower_last(doc.edu(b)),
        tokens: (a..=b).map(|i| doc.edu(i).token_count()).sum(),
        edus: b + 1 - a,
        span: (a, b),
        head: node.head(),
    }
}

fn queue_item(doc: &DocView<'_>, i: usize) -> Item {
    let e = doc.edu(i);
    Item {
        first: lower_first(e),
        last: lower_last(e),
        tokens: e.token_count(),
        edus: 1,
        span: (i, i),
        head: i,
    }
}

fn same<T: PartialEq>(a: Option<T>, b: Option<T>) -> Option<bool> {
    Some(a? == b?)
}

fn bit(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

/// Features of `state`. Missing items and missing information add nothing.
pub fn extract_features(state: &ParserState, doc: &DocView<'_>, cfg: &FeatureConfig) -> Vec<String> {
    let s0 = state.stack_item(0).map(|n| stack_item(doc, n));
    let s1 = state.stack_item(1).map(|n| stack_item(doc, n));
    let q0 = state.queue_front().map(|i| queue_item(doc, i));
    let mut f = Vec::with_capacity(48);

    for (name, item) in [("s0", &s0), ("s1", &s1)] {
        if let Some(it) = item {
            f.push(format!("{name}_first={}", it.first));
            f.push(format!("{name}_last={}", it.last));
            f.push(format!("{name}_len={}", token_bucket(it.tokens)));
            f.push(format!("{name}_edus={}", edu_bucket(it.edus)));
        }
    }
    if let Some(q) = &q0 {
        f.push(format!("q0_first={}", q.first));
        f.push(format!("q0_last={}", q.last));
        f.push(format!("q0_len={}", token_bucket(q.tokens)));
    }

    if cfg.conjunctions {
        if let (Some(a), Some(b)) = (&s1, &s0) {
            f.push(format!("s1s0_first={}|{}", a.first, b.first));
            f.push(format!("s1last_s0first={}|{}", a.last, b.first));
            f.push(format!("s1s0_edus={}|{}", edu_bucket(a.edus), edu_bucket(b.edus)));
            f.push(format!("s0first_s1edus={}|{}", b.first, edu_bucket(a.edus)));
            f.push(format!("s1first_s0edus={}|{}", a.first, edu_bucket(b.edus)));
            f.push(format!("s1s0_queue={}", q0.is_some()));
        }
        if let (Some(a), Some(q)) = (&s0, &q0) {
            f.push(format!("s0q0_first={}|{}", a.first, q.first));
            f.push(format!("s0edus_q0first={}|{}", edu_bucket(a.edus), q.first));
        }
    }

    if cfg.organizational {
        if let (Some(a), Some(b)) = (&s1, &s0) {
            organizational(doc, "s1s0", a, b, &mut f);
        }
        if let (Some(a), Some(q)) = (&s0, &q0) {
            organizational(doc, "s0q0", a, q, &mut f);
        }
        for (name, item) in [("s0", &s0), ("s1", &s1), ("q0", &q0)] {
            if let Some(starts) = item.as_ref().and_then(|it| doc.starts_paragraph(it.span.0)) {
                f.push(format!("{name}_starts_par={}", bit(starts)));
            }
        }
    }

    if cfg.stacking != Stacking::None && !doc.annotations.is_empty() {
        for (name, item) in [("s0", &s0), ("s1", &s1), ("q0", &q0)] {
            let Some(ann) = item.as_ref().and_then(|it| doc.annotation(it.head)) else {
                continue;
            };
            match cfg.stacking {
                Stacking::Label => {
                    if let Some(l) = &ann.label {
                        f.push(format!("{name}_deplab={l}"));
                    }
                }
                Stacking::Graph => {
                    if let Some(d) = ann.direction {
                        f.push(format!("{name}_depdir={}", d.as_str()));
                    }
                    if let Some(d) = &ann.distance {
                        f.push(format!("{name}_depdist={d}"));
                    }
                }
                Stacking::None => {}
            }
        }
    }
    f
}

/// Boundary features between adjacent items `a` (left) and `b` (right).
fn organizational(doc: &DocView<'_>, name: &str, a: &Item, b: &Item, f: &mut Vec<String>) {
    let (l, r) = (doc.edu(a.span.1), doc.edu(b.span.0));
    if let Some(s) = same(l.sentence_id, r.sentence_id) {
        f.push(format!("{name}_same_sent={}", bit(s)));
    }
    if let Some(p) = same(l.paragraph_id, r.paragraph_id) {
        f.push(format!("{name}_same_par={}", bit(p)));
    }
}
