//! RST treebank tooling: rs3/rsd I/O, binarization, Parseval scoring,
//! dependency conversion, relation mapping and error analysis.

pub mod analysis;
pub mod binary;
pub mod depconv;
pub mod error;
pub mod metrics;
pub mod relmap;
pub mod stats;
pub mod synth;
pub mod tree;
pub mod treebank;

pub use binary::{binarize, binarize_with, debinarize, BinaryNode, BinaryTree, Branching};
pub use error::{Error, Result};
pub use tree::{ConstituentTree, Edu, Node, Nuclearity, Role};
