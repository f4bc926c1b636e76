//! Treebank I/O: `.rs3` constituent files, `.rsd` dependency files and
//! partitioned corpora.

mod corpus;
mod rs3;
mod rsd;

pub use corpus::{
    apply_boundaries, load_corpus, load_corpus_with, write_boundaries, Corpus, CorpusDocument, LoadOptions, Manifest,
    ManifestEntry, Partition,
};
pub use rs3::{parse_rs3, parse_rs3_with, read_inventory, write_rs3, Rs3Options};
pub use rsd::{parse_rsd, write_rsd, Arc, DepDocument, ROOT_LABEL};
