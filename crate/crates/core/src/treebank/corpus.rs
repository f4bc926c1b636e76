//! Partitioned multi-genre corpora.
//!
//! A corpus is a directory tree of `<doc_id>.rs3` files plus a manifest with
//! one `doc_id<TAB>partition<TAB>genre` line per document. An optional
//! `<doc_id>.bounds` sidecar next to a document lists the EDU indices that
//! open a new sentence or paragraph, tab-separated from the key:
//!
//! ```text
//! sentences<TAB>1 3 4
//! paragraphs<TAB>1 4
//! ```

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::rs3::{parse_rs3_with, Rs3Options};
use crate::error::{Error, Result};
use crate::tree::{ConstituentTree, Edu};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Partition {
    Train,
    Dev,
    Test,
}

impl Partition {
    pub const ALL: [Partition; 3] = [Partition::Train, Partition::Dev, Partition::Test];

    pub fn as_str(self) -> &'static str {
        match self {
            Partition::Train => "train",
            Partition::Dev => "dev",
            Partition::Test => "test",
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Partition::Train),
            "dev" => Ok(Partition::Dev),
            "test" => Ok(Partition::Test),
            other => Err(Error::Parse(format!("unknown partition `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestEntry {
    pub doc_id: String,
    pub partition: Partition,
    pub genre: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse(content: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut seen = BTreeSet::new();
        for (n, line) in content.lines().enumerate() {
            let line = line.trim_end();
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(Error::Parse(format!(
                    "manifest line {}: expected doc_id, partition and genre",
                    n + 1
                )));
            }
            if !seen.insert(cols[0].to_owned()) {
                return Err(Error::DuplicateDocId(cols[0].to_owned()));
            }
            entries.push(ManifestEntry {
                doc_id: cols[0].to_owned(),
                partition: cols[1].parse()?,
                genre: cols[2].to_owned(),
            });
        }
        Ok(Manifest { entries })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
    }

    pub fn to_tsv(&self) -> String {
        self.entries
            .iter()
            .map(|e| format!("{}\t{}\t{}\n", e.doc_id, e.partition, e.genre))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusDocument {
    pub tree: ConstituentTree,
    pub partition: Partition,
}

impl CorpusDocument {
    pub fn doc_id(&self) -> &str {
        &self.tree.doc_id
    }

    pub fn genre(&self) -> &str {
        &self.tree.genre
    }
}

/// Loaded corpus; documents are kept sorted by `doc_id`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Corpus {
    docs: Vec<CorpusDocument>,
}

impl Corpus {
    pub fn from_documents(mut docs: Vec<CorpusDocument>) -> Result<Self> {
        docs.sort_by(|a, b| a.tree.doc_id.cmp(&b.tree.doc_id));
        if let Some(w) = docs.windows(2).find(|w| w[0].tree.doc_id == w[1].tree.doc_id) {
            return Err(Error::DuplicateDocId(w[0].tree.doc_id.clone()));
        }
        Ok(Corpus { docs })
    }

    pub fn docs(&self) -> &[CorpusDocument] {
        &self.docs
    }

    pub fn trees(&self) -> impl Iterator<Item = &ConstituentTree> {
        self.docs.iter().map(|d| &d.tree)
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn get(&self, doc_id: &str) -> Option<&CorpusDocument> {
        self.docs
            .binary_search_by(|d| d.tree.doc_id.as_str().cmp(doc_id))
            .ok()
            .map(|i| &self.docs[i])
    }

    pub fn genres(&self) -> Vec<&str> {
        let set: BTreeSet<&str> = self.docs.iter().map(|d| d.genre()).collect();
        set.into_iter().collect()
    }

    pub fn filter(&self, mut keep: impl FnMut(&CorpusDocument) -> bool) -> Corpus {
        Corpus {
            docs: self.docs.iter().filter(|d| keep(d)).cloned().collect(),
        }
    }

    pub fn partition(&self, p: Partition) -> Corpus {
        self.filter(|d| d.partition == p)
    }

    pub fn genre(&self, g: &str) -> Corpus {
        self.filter(|d| d.genre() == g)
    }

    pub fn edu_count(&self) -> usize {
        self.docs.iter().map(|d| d.tree.len()).sum()
    }

    /// Document counts per partition.
    pub fn partition_counts(&self) -> BTreeMap<Partition, usize> {
        let mut out: BTreeMap<Partition, usize> = Partition::ALL.iter().map(|&p| (p, 0)).collect();
        for d in &self.docs {
            *out.entry(d.partition).or_default() += 1;
        }
        out
    }

    /// `(docs, EDUs)` per genre.
    pub fn genre_counts(&self) -> BTreeMap<String, (usize, usize)> {
        let mut out: BTreeMap<String, (usize, usize)> = BTreeMap::new();
        for d in &self.docs {
            let e = out.entry(d.genre().to_owned()).or_default();
            e.0 += 1;
            e.1 += d.tree.len();
        }
        out
    }

    pub fn manifest(&self) -> Manifest {
        Manifest {
            entries: self
                .docs
                .iter()
                .map(|d| ManifestEntry {
                    doc_id: d.tree.doc_id.clone(),
                    partition: d.partition,
                    genre: d.tree.genre.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LoadOptions {
    pub rs3: Rs3Options,
    /// Worker threads used to parse files.
    pub jobs: usize,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            rs3: Rs3Options::default(),
            jobs: 1,
        }
    }
}

pub fn load_corpus(root: &Path, manifest: &Manifest) -> Result<Corpus> {
    load_corpus_with(root, manifest, LoadOptions::default())
}

pub fn load_corpus_with(root: &Path, manifest: &Manifest, opts: LoadOptions) -> Result<Corpus> {
    let files = index_files(root, "rs3")?;
    let mut jobs = Vec::with_capacity(manifest.entries.len());
    for entry in &manifest.entries {
        let path = files
            .get(&entry.doc_id)
            .ok_or_else(|| Error::MissingDocument(entry.doc_id.clone()))?;
        jobs.push((entry, path.clone()));
    }

    let load = |(entry, path): &(&ManifestEntry, PathBuf)| -> Result<CorpusDocument> {
        let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut tree = parse_rs3_with(&content, &entry.doc_id, opts.rs3).map_err(|e| match e {
            Error::Io { .. } => e,
            other => Error::Parse(format!("{}: {other}", path.display())),
        })?;
        tree.genre = entry.genre.clone();
        let bounds = path.with_extension("bounds");
        if bounds.exists() {
            let content = fs::read_to_string(&bounds).map_err(|e| Error::io(&bounds, e))?;
            apply_boundaries(&mut tree.edus, &content)?;
        }
        Ok(CorpusDocument {
            tree,
            partition: entry.partition,
        })
    };

    let docs: Vec<CorpusDocument> = if opts.jobs <= 1 || jobs.len() < 2 {
        jobs.iter().map(load).collect::<Result<_>>()?
    } else {
        let chunk = jobs.len().div_ceil(opts.jobs);
        std::thread::scope(|s| {
            let handles: Vec<_> = jobs
                .chunks(chunk)
                .map(|c| s.spawn(move || c.iter().map(load).collect::<Result<Vec<_>>>()))
                .collect();
            let mut all = Vec::with_capacity(jobs.len());
            for h in handles {
                all.extend(h.join().expect("loader thread panicked")?);
            }
            Ok::<_, Error>(all)
        })?
    };
    Corpus::from_documents(docs)
}

/// Map file stem to path for every file with `ext` below `root`.
fn index_files(root: &Path, ext: &str) -> Result<HashMap<String, PathBuf>> {
    let mut out = HashMap::new();
    let mut pending = vec![root.to_path_buf()];
    while let Some(dir) = pending.pop() {
        let entries = fs::read_dir(&dir).map_err(|e| Error::io(&dir, e))?;
        for entry in entries {
            let path = entry.map_err(|e| Error::io(&dir, e))?.path();
            if path.is_dir() {
                pending.push(path);
            } else if path.extension().is_some_and(|e| e == ext) {
                let stem = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
                if out.insert(stem.clone(), path).is_some() {
                    return Err(Error::DuplicateDocId(stem));
                }
            }
        }
    }
    Ok(out)
}

/// Fill sentence and paragraph ids from sidecar content.
pub fn apply_boundaries(edus: &mut [Edu], content: &str) -> Result<()> {
    for line in content.lines().filter(|l| !l.trim().is_empty()) {
        let (key, rest) = line
            .split_once('\t')
            .ok_or_else(|| Error::Parse(format!("bad boundary line `{line}`")))?;
        let mut starts = rest
            .split_whitespace()
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad boundary `{s}`")))
            })
            .collect::<Result<BTreeSet<_>>>()?;
        starts.insert(1);
        if let Some(&bad) = starts.iter().find(|&&s| s == 0 || s > edus.len()) {
            return Err(Error::Parse(format!("boundary {bad} outside 1..={}", edus.len())));
        }
        let mut id = 0u32;
        for edu in edus.iter_mut() {
            if starts.contains(&edu.index) {
                id += 1;
            }
            match key.trim() {
                "sentences" => edu.sentence_id = Some(id),
                "paragraphs" => edu.paragraph_id = Some(id),
                other => return Err(Error::Parse(format!("unknown boundary kind `{other}`"))),
            }
        }
    }
    Ok(())
}

/// Sidecar content describing the boundaries present in `edus`.
pub fn write_boundaries(edus: &[Edu]) -> String {
    let mut out = String::new();
    let starts = |get: fn(&Edu) -> Option<u32>| -> Option<String> {
        let mut prev = None;
        let mut starts = Vec::new();
        for e in edus {
            let id = get(e)?;
            if prev != Some(id) {
                starts.push(e.index.to_string());
            }
            prev = Some(id);
        }
        Some(starts.join(" "))
    };
    if let Some(s) = starts(|e| e.sentence_id) {
        out.push_str(&format!("sentences\t{s}\n"));
    }
    if let Some(p) = starts(|e| e.paragraph_id) {
        out.push_str(&format!("paragraphs\t{p}\n"));
    }
    out
}
