//! Tab-separated dependency format: `index<TAB>text<TAB>head<TAB>label`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::tree::Edu;

/// Label carried by the arc of the central unit.
pub const ROOT_LABEL: &str = "root";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub dependent: usize,
    /// 0 for the root arc.
    pub head: usize,
    pub label: String,
}

/// A document in dependency form. `arcs[i]` is the arc of EDU `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepDocument {
    pub doc_id: String,
    pub edus: Vec<Edu>,
    pub arcs: Vec<Arc>,
}

impl DepDocument {
    pub fn new(doc_id: impl Into<String>, edus: Vec<Edu>, arcs: Vec<Arc>) -> Result<Self> {
        let doc = DepDocument {
            doc_id: doc_id.into(),
            edus,
            arcs,
        };
        doc.validate()?;
        Ok(doc)
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn head_of(&self, edu: usize) -> usize {
        self.arcs[edu - 1].head
    }

    pub fn label_of(&self, edu: usize) -> &str {
        &self.arcs[edu - 1].label
    }

    /// Exactly one root arc, every EDU has one head, no cycles.
    pub fn validate(&self) -> Result<()> {
        let n = self.arcs.len();
        if self.edus.len() != n {
            return Err(Error::Parse(format!("{} EDUs but {} arcs", self.edus.len(), n)));
        }
        for (i, arc) in self.arcs.iter().enumerate() {
            if arc.dependent != i + 1 {
                return Err(Error::Parse(format!("arc {} has dependent {}", i + 1, arc.dependent)));
            }
            if arc.head > n {
                return Err(Error::HeadOutOfRange {
                    line: i + 1,
                    head: arc.head,
                    max: n,
                });
            }
        }
        for start in 1..=n {
            let mut cur = start;
            let mut steps = 0;
            while cur != 0 {
                cur = self.arcs[cur - 1].head;
                steps += 1;
                if steps > n {
                    return Err(Error::CycleDetected(start));
                }
            }
        }
        match self.arcs.iter().filter(|a| a.head == 0).count() {
            0 if n > 0 => Err(Error::NoRoot),
            0 | 1 => Ok(()),
            k => Err(Error::Parse(format!("{k} root arcs"))),
        }
    }
}

pub fn write_rsd(doc: &DepDocument) -> String {
    let mut out = String::new();
    for (edu, arc) in doc.edus.iter().zip(&doc.arcs) {
        let text = edu.text.replace(['\t', '\n', '\r'], " ");
        let _ = writeln!(out, "{}\t{}\t{}\t{}", arc.dependent, text, arc.head, arc.label);
    }
    out
}

pub fn parse_rsd(content: &str, doc_id: &str) -> Result<DepDocument> {
    let mut edus = Vec::new();
    let mut arcs = Vec::new();
    let lines: Vec<&str> = content.lines().filter(|l| !l.trim().is_empty()).collect();
    let max = lines.len();
    for (n, line) in lines.iter().enumerate() {
        let line_no = n + 1;
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 4 {
            return Err(Error::BadColumnCount {
                line: line_no,
                found: cols.len(),
            });
        }
        let index: usize = cols[0]
            .parse()
            .map_err(|_| Error::Parse(format!("line {line_no}: bad index `{}`", cols[0])))?;
        if index != line_no {
            return Err(Error::Parse(format!(
                "line {line_no}: expected index {line_no}, found {index}"
            )));
        }
        let head: usize = cols[2]
            .parse()
            .map_err(|_| Error::Parse(format!("line {line_no}: bad head `{}`", cols[2])))?;
        if head > max {
            return Err(Error::HeadOutOfRange {
                line: line_no,
                head,
                max,
            });
        }
        edus.push(Edu::new(index, cols[1]));
        arcs.push(Arc {
            dependent: index,
            head,
            label: cols[3].to_owned(),
        });
    }
    DepDocument::new(doc_id, edus, arcs)
}
