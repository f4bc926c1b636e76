//! Relation classes and the GUM to RST-DT mapping.
//!
//! The tables ship as tab-separated data files under `data/` and are parsed on
//! first use. Lookups never fall back to a default: unknown labels are errors.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::tree::ConstituentTree;

pub const GUM_MAPPING_TSV: &str = include_str!("../data/gum_rstdt_mapping.tsv");
pub const RSTDT_CLASSES_TSV: &str = include_str!("../data/rstdt_classes.tsv");
pub const CLASS_ALIGNMENT_TSV: &str = include_str!("../data/class_alignment.tsv");

/// Annotation scheme a label belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Gum,
    Rstdt,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Gum => "gum",
            Scheme::Rstdt => "rstdt",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gum" => Ok(Scheme::Gum),
            "rstdt" | "rst-dt" => Ok(Scheme::Rstdt),
            other => Err(Error::Parse(format!("unknown scheme `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MappingRow {
    pub gum_relation: String,
    pub gum_class: String,
    pub rstdt_class: String,
}

/// The mapping tables.
#[derive(Clone, Debug)]
pub struct RelationMap {
    rows: Vec<MappingRow>,
    gum: BTreeMap<String, usize>,
    gum_classes: BTreeMap<String, String>,
    rstdt_fine: BTreeMap<String, String>,
    rstdt_classes: BTreeMap<String, String>,
    alignment: BTreeMap<String, String>,
}

fn data_lines(content: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    content
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|(n, l)| (n + 1, l.split('\t').map(str::trim).collect()))
}

impl RelationMap {
    /// The tables compiled into the crate.
    pub fn builtin() -> &'static RelationMap {
        static MAP: OnceLock<RelationMap> = OnceLock::new();
        MAP.get_or_init(|| {
            RelationMap::parse(GUM_MAPPING_TSV, RSTDT_CLASSES_TSV, CLASS_ALIGNMENT_TSV)
                .expect("builtin relation tables are well-formed")
        })
    }

    pub fn parse(mapping: &str, rstdt_classes: &str, alignment: &str) -> Result<Self> {
        let mut rows = Vec::new();
        let mut gum = BTreeMap::new();
        for (n, cols) in data_lines(mapping) {
            if cols.len() != 3 {
                return Err(Error::Parse(format!("mapping line {n}: expected 3 columns")));
            }
            let row = MappingRow {
                gum_relation: cols[0].to_owned(),
                gum_class: cols[1].to_owned(),
                rstdt_class: cols[2].to_owned(),
            };
            if gum.insert(row.gum_relation.clone(), rows.len()).is_some() {
                return Err(Error::Parse(format!(
                    "mapping line {n}: duplicate `{}`",
                    row.gum_relation
                )));
            }
            rows.push(row);
        }
        let gum_classes = rows
            .iter()
            .map(|r| (r.gum_class.to_ascii_lowercase(), r.gum_class.clone()))
            .collect();

        let mut rstdt_fine = BTreeMap::new();
        for (n, cols) in data_lines(rstdt_classes) {
            if cols.len() != 2 {
                return Err(Error::Parse(format!("class line {n}: expected 2 columns")));
            }
            if rstdt_fine
                .insert(cols[0].to_ascii_lowercase(), cols[1].to_owned())
                .is_some()
            {
                return Err(Error::Parse(format!("class line {n}: duplicate `{}`", cols[0])));
            }
        }
        let rstdt_classes = rstdt_fine
            .values()
            .map(|c: &String| (c.to_ascii_lowercase(), c.clone()))
            .collect();

        let mut align = BTreeMap::new();
        for (n, cols) in data_lines(alignment) {
            if cols.len() != 2 {
                return Err(Error::Parse(format!("alignment line {n}: expected 2 columns")));
            }
            align.insert(cols[0].to_owned(), cols[1].to_owned());
        }

        let map = RelationMap {
            rows,
            gum,
            gum_classes,
            rstdt_fine,
            rstdt_classes,
            alignment: align,
        };
        for row in &map.rows {
            if !map.rstdt_classes.contains_key(&row.rstdt_class.to_ascii_lowercase()) {
                return Err(Error::Parse(format!(
                    "`{}` maps to unknown RST-DT class `{}`",
                    row.gum_relation, row.rstdt_class
                )));
            }
            if !map.alignment.contains_key(&row.gum_class) {
                return Err(Error::Parse(format!("GUM class `{}` has no alignment", row.gum_class)));
            }
        }
        Ok(map)
    }

    pub fn rows(&self) -> &[MappingRow] {
        &self.rows
    }

    /// Distinct GUM classes in table order.
    pub fn gum_classes(&self) -> Vec<&str> {
        let mut seen = BTreeSet::new();
        self.rows
            .iter()
            .map(|r| r.gum_class.as_str())
            .filter(|c| seen.insert(*c))
            .collect()
    }

    pub fn rstdt_classes(&self) -> Vec<&str> {
        let set: BTreeSet<&str> = self.rstdt_classes.values().map(String::as_str).collect();
        set.into_iter().collect()
    }

    /// SHA-256 over the canonical rows (`a\tb\tc\n` each, in table order).
    pub fn checksum(&self) -> String {
        let mut h = Sha256::new();
        for r in &self.rows {
            h.update(format!("{}\t{}\t{}\n", r.gum_relation, r.gum_class, r.rstdt_class).as_bytes());
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Coarse class of a fine label or class name.
    pub fn to_class(&self, label: &str, scheme: Scheme) -> Result<String> {
        let lower = label.to_ascii_lowercase();
        let base = strip_kind_suffix(&lower);
        let found = match scheme {
            Scheme::Gum => self
                .gum
                .get(base)
                .map(|&i| self.rows[i].gum_class.clone())
                .or_else(|| self.gum_classes.get(base).cloned()),
            Scheme::Rstdt => self
                .rstdt_fine
                .get(strip_rstdt_suffixes(base))
                .or_else(|| self.rstdt_classes.get(base))
                .cloned(),
        };
        found.ok_or_else(|| Error::UnknownLabel {
            label: label.to_owned(),
            scheme: scheme.to_string(),
        })
    }

    /// RST-DT class of a GUM relation.
    pub fn gum_to_rstdt(&self, gum_relation: &str) -> Result<String> {
        let base = strip_kind_suffix(&gum_relation.to_ascii_lowercase()).to_owned();
        self.gum
            .get(&base)
            .map(|&i| self.rows[i].rstdt_class.clone())
            .ok_or_else(|| Error::UnknownLabel {
                label: gum_relation.to_owned(),
                scheme: Scheme::Gum.to_string(),
            })
    }

    /// RST-DT class aligned with a GUM class.
    pub fn aligned_class(&self, gum_class: &str) -> Option<&str> {
        self.alignment.get(gum_class).map(String::as_str)
    }

    /// Whether a GUM relation maps away from its class's aligned RST-DT class.
    pub fn is_mismatch(&self, gum_relation: &str) -> Result<bool> {
        let class = self.to_class(gum_relation, Scheme::Gum)?;
        let mapped = self.gum_to_rstdt(gum_relation)?;
        Ok(self.aligned_class(&class) != Some(mapped.as_str()))
    }

    /// Instance-weighted share of GUM relation instances whose mapped RST-DT
    /// class differs from their class's aligned counterpart. 0 when there are
    /// no instances.
    pub fn mapping_mismatch_rate<'a>(&self, trees: impl IntoIterator<Item = &'a ConstituentTree>) -> Result<f64> {
        let mut total = 0usize;
        let mut mismatched = 0usize;
        for t in trees {
            for inst in t.relation_instances() {
                total += 1;
                if self.is_mismatch(inst.label)? {
                    mismatched += 1;
                }
            }
        }
        Ok(if total == 0 {
            0.0
        } else {
            mismatched as f64 / total as f64
        })
    }
}

/// GUM rs3 files mark relation kinds with `_r` / `_m`.
fn strip_kind_suffix(label: &str) -> &str {
    label
        .strip_suffix("_r")
        .or_else(|| label.strip_suffix("_m"))
        .unwrap_or(label)
}

/// RST-DT marks embedded (`-e`) and nucleus/satellite-side (`-n`, `-s`) variants.
fn strip_rstdt_suffixes(mut label: &str) -> &str {
    while let Some(rest) = label.strip_suffix("-e") {
        label = rest;
    }
    label
        .strip_suffix("-n")
        .or_else(|| label.strip_suffix("-s"))
        .unwrap_or(label)
}

/// How labels are normalized before relation scoring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelMode {
    /// Collapse to coarse classes of the scheme.
    Coarse(Scheme),
    /// Compare labels verbatim.
    Fine,
}

impl LabelMode {
    pub fn normalize(self, label: &str) -> Result<String> {
        match self {
            LabelMode::Coarse(scheme) => RelationMap::builtin().to_class(label, scheme),
            LabelMode::Fine => Ok(label.to_owned()),
        }
    }
}

impl fmt::Display for LabelMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelMode::Coarse(s) => f.write_str(s.as_str()),
            LabelMode::Fine => f.write_str("fine"),
        }
    }
}

impl FromStr for LabelMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fine" => Ok(LabelMode::Fine),
            other => Ok(LabelMode::Coarse(other.parse()?)),
        }
    }
}
