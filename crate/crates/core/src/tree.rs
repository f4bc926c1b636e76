//! N-ary RST constituent trees.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relation name used to link a nucleus to its covering span.
pub const SPAN: &str = "span";

/// Pseudo-relation joining the fragments of a discontinuous EDU.
pub const SAME_UNIT: &str = "same-unit";

/// Elementary discourse unit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edu {
    /// 1-based position within the document.
    pub index: usize,
    pub text: String,
    pub sentence_id: Option<u32>,
    pub paragraph_id: Option<u32>,
}

impl Edu {
    pub fn new(index: usize, text: impl Into<String>) -> Self {
        Edu {
            index,
            text: text.into(),
            sentence_id: None,
            paragraph_id: None,
        }
    }

    /// Whitespace tokens of the EDU text.
    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.text.split_whitespace()
    }

    pub fn token_count(&self) -> usize {
        self.tokens().count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RelKind {
    Rst,
    Multinuc,
}

impl RelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RelKind::Rst => "rst",
            RelKind::Multinuc => "multinuc",
        }
    }
}

/// Relations declared by a document header.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelationInventory {
    entries: BTreeMap<String, (bool, bool)>,
}

impl RelationInventory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, kind: RelKind) {
        let e = self.entries.entry(name.into()).or_default();
        match kind {
            RelKind::Rst => e.0 = true,
            RelKind::Multinuc => e.1 = true,
        }
    }

    pub fn contains(&self, name: &str, kind: RelKind) -> bool {
        self.entries
            .get(name)
            .map(|&(rst, multi)| match kind {
                RelKind::Rst => rst,
                RelKind::Multinuc => multi,
            })
            .unwrap_or(false)
    }

    pub fn knows(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    /// `(name, kind)` pairs in name order, rst before multinuc.
    pub fn iter(&self) -> impl Iterator<Item = (&str, RelKind)> {
        self.entries.iter().flat_map(|(name, &(rst, multi))| {
            let rst = rst.then_some((name.as_str(), RelKind::Rst));
            let multi = multi.then_some((name.as_str(), RelKind::Multinuc));
            rst.into_iter().chain(multi)
        })
    }

    pub fn len(&self) -> usize {
        self.iter().count()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Role of a node relative to its parent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    Root,
    Nucleus,
    Satellite,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeBody {
    /// 1-based EDU index.
    Edu(usize),
    Children(Vec<Node>),
}

/// A node of an n-ary RST tree.
///
/// `relation` is `None` only at the root. Nuclei of mononuclear nodes carry
/// [`SPAN`]; nuclei of multinuclear nodes carry the shared relation; satellites
/// carry their own relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub role: Role,
    pub relation: Option<String>,
    pub body: NodeBody,
}

/// Shape of an internal node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeShape<'a> {
    /// All children are nuclei sharing one relation.
    Multinuclear(&'a str),
    /// One nucleus at `nucleus` position plus satellites.
    Mononuclear { nucleus: usize },
}

impl Node {
    pub fn leaf(role: Role, relation: Option<&str>, edu: usize) -> Self {
        Node {
            role,
            relation: relation.map(str::to_owned),
            body: NodeBody::Edu(edu),
        }
    }

    pub fn internal(role: Role, relation: Option<&str>, children: Vec<Node>) -> Self {
        Node {
            role,
            relation: relation.map(str::to_owned),
            body: NodeBody::Children(children),
        }
    }

    pub fn relation(&self) -> &str {
        self.relation.as_deref().unwrap_or("")
    }

    pub fn children(&self) -> &[Node] {
        match &self.body {
            NodeBody::Edu(_) => &[],
            NodeBody::Children(c) => c,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self.body, NodeBody::Edu(_))
    }

    /// First and last EDU index covered by this node.
    pub fn span(&self) -> (usize, usize) {
        match &self.body {
            NodeBody::Edu(i) => (*i, *i),
            NodeBody::Children(c) => (c[0].span().0, c[c.len() - 1].span().1),
        }
    }

    /// Leaves from left to right.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match &self.body {
            NodeBody::Edu(i) => out.push(*i),
            NodeBody::Children(c) => c.iter().for_each(|n| n.collect_leaves(out)),
        }
    }

    /// Classify an internal node; `None` for leaves.
    pub fn shape(&self) -> Option<NodeShape<'_>> {
        let children = match &self.body {
            NodeBody::Edu(_) => return None,
            NodeBody::Children(c) => c,
        };
        let nuclei: Vec<usize> = children
            .iter()
            .enumerate()
            .filter(|(_, c)| c.role == Role::Nucleus)
            .map(|(i, _)| i)
            .collect();
        if nuclei.len() == 1 {
            Some(NodeShape::Mononuclear { nucleus: nuclei[0] })
        } else {
            Some(NodeShape::Multinuclear(children[0].relation()))
        }
    }

    /// Pre-order traversal.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Node)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }

    fn validate(&self, path: &str) -> Result<()> {
        let children = match &self.body {
            NodeBody::Edu(_) => return Ok(()),
            NodeBody::Children(c) => c,
        };
        let (first, last) = self.span();
        let invalid = |msg: String| Error::InvalidTree(format!("node {path} ({first}-{last}): {msg}"));
        if children.len() < 2 {
            return Err(invalid("internal node with fewer than two children".into()));
        }
        for w in children.windows(2) {
            if w[0].span().1 + 1 != w[1].span().0 {
                return Err(invalid("children are not contiguous".into()));
            }
        }
        let nuclei: Vec<&Node> = children.iter().filter(|c| c.role == Role::Nucleus).collect();
        for c in children {
            if c.role == Role::Root {
                return Err(invalid("root role below the root".into()));
            }
            if c.relation.as_deref().is_none_or(str::is_empty) {
                return Err(invalid("child without relation".into()));
            }
        }
        match nuclei.len() {
            0 => return Err(invalid("no nucleus".into())),
            1 => {
                if nuclei[0].relation() != SPAN {
                    return Err(invalid(format!(
                        "single nucleus must carry `{SPAN}`, found `{}`",
                        nuclei[0].relation()
                    )));
                }
            }
            _ => {
                let label = nuclei[0].relation();
                if label == SPAN || nuclei.iter().any(|n| n.relation() != label) {
                    return Err(invalid("multinuclear children must share one relation".into()));
                }
                if nuclei.len() != children.len() {
                    return Err(invalid("multinuclear node mixes nuclei and satellites".into()));
                }
            }
        }
        for c in children {
            if c.role == Role::Satellite && c.relation() == SPAN {
                return Err(invalid("satellite labelled `span`".into()));
            }
        }
        for (i, c) in children.iter().enumerate() {
            c.validate(&format!("{path}.{i}"))?;
        }
        Ok(())
    }
}

/// A validated n-ary RST tree over a document's EDUs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstituentTree {
    pub doc_id: String,
    pub genre: String,
    pub edus: Vec<Edu>,
    pub root: Node,
}

impl ConstituentTree {
    /// Build and validate a tree.
    pub fn new(doc_id: impl Into<String>, genre: impl Into<String>, edus: Vec<Edu>, root: Node) -> Result<Self> {
        let tree = ConstituentTree {
            doc_id: doc_id.into(),
            genre: genre.into(),
            edus,
            root,
        };
        tree.validate()?;
        Ok(tree)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, edu) in self.edus.iter().enumerate() {
            if edu.index != i + 1 {
                return Err(Error::InvalidTree(format!(
                    "EDU indices are not contiguous: position {} has index {}",
                    i + 1,
                    edu.index
                )));
            }
            if edu.text.trim().is_empty() {
                return Err(Error::EmptySegment(edu.index.to_string()));
            }
        }
        let leaves = self.root.leaves();
        if leaves != (1..=self.edus.len()).collect::<Vec<_>>() {
            return Err(Error::InvalidTree("leaves do not match the EDU sequence".into()));
        }
        if self.root.role != Role::Root || self.root.relation.is_some() {
            return Err(Error::InvalidTree("root must have role Root and no relation".into()));
        }
        self.root.validate("r")
    }

    pub fn len(&self) -> usize {
        self.edus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edus.is_empty()
    }

    pub fn token_count(&self) -> usize {
        self.edus.iter().map(Edu::token_count).sum()
    }

    /// Equality on spans, roles, labels and EDU texts; ignores ids and genre.
    pub fn structurally_eq(&self, other: &ConstituentTree) -> bool {
        self.edus.len() == other.edus.len()
            && self.edus.iter().zip(&other.edus).all(|(a, b)| a.text == b.text)
            && self.root == other.root
    }

    /// Relation instances: one per satellite and one per multinuclear node.
    pub fn relation_instances(&self) -> Vec<RelationInstance<'_>> {
        let mut out = Vec::new();
        self.root.walk(&mut |node| match node.shape() {
            Some(NodeShape::Multinuclear(label)) => out.push(RelationInstance {
                label,
                nuclearity: Nuclearity::NN,
            }),
            Some(NodeShape::Mononuclear { nucleus }) => {
                for (i, c) in node.children().iter().enumerate() {
                    if i == nucleus {
                        continue;
                    }
                    out.push(RelationInstance {
                        label: c.relation(),
                        nuclearity: if i > nucleus { Nuclearity::NS } else { Nuclearity::SN },
                    });
                }
            }
            None => {}
        });
        out
    }

    /// Inventory implied by the labels in use.
    pub fn implied_inventory(&self) -> RelationInventory {
        let mut inv = RelationInventory::new();
        self.root.walk(&mut |node| match node.shape() {
            Some(NodeShape::Multinuclear(label)) => inv.insert(label, RelKind::Multinuc),
            Some(NodeShape::Mononuclear { nucleus }) => {
                for (i, c) in node.children().iter().enumerate() {
                    if i != nucleus {
                        inv.insert(c.relation(), RelKind::Rst);
                    }
                }
            }
            None => {}
        });
        inv
    }
}

/// Direction of a relation instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Nuclearity {
    NS,
    SN,
    NN,
}

impl Nuclearity {
    pub const ALL: [Nuclearity; 3] = [Nuclearity::NS, Nuclearity::SN, Nuclearity::NN];

    pub fn as_str(self) -> &'static str {
        match self {
            Nuclearity::NS => "NS",
            Nuclearity::SN => "SN",
            Nuclearity::NN => "NN",
        }
    }
}

impl fmt::Display for Nuclearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Nuclearity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "NS" => Ok(Nuclearity::NS),
            "SN" => Ok(Nuclearity::SN),
            "NN" => Ok(Nuclearity::NN),
            other => Err(Error::Parse(format!("unknown nuclearity `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RelationInstance<'a> {
    pub label: &'a str,
    pub nuclearity: Nuclearity,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edus(n: usize) -> Vec<Edu> {
        (1..=n).map(|i| Edu::new(i, format!("unit {i}"))).collect()
    }

    #[test]
    fn single_leaf_tree_is_valid() {
        let t = ConstituentTree::new("d", "g", edus(1), Node::leaf(Role::Root, None, 1)).unwrap();
        assert_eq!(t.root.span(), (1, 1));
        assert!(t.relation_instances().is_empty());
    }

    #[test]
    fn rejects_multinuclear_with_mixed_labels() {
        let root = Node::internal(
            Role::Root,
            None,
            vec![
                Node::leaf(Role::Nucleus, Some("joint-list"), 1),
                Node::leaf(Role::Nucleus, Some("joint-sequence"), 2),
            ],
        );
        assert!(ConstituentTree::new("d", "g", edus(2), root).is_err());
    }

    #[test]
    fn rejects_nucleus_without_span_label() {
        let root = Node::internal(
            Role::Root,
            None,
            vec![
                Node::leaf(Role::Nucleus, Some("elaboration-additional"), 1),
                Node::leaf(Role::Satellite, Some("elaboration-additional"), 2),
            ],
        );
        assert!(ConstituentTree::new("d", "g", edus(2), root).is_err());
    }

    #[test]
    fn rejects_whitespace_edu() {
        let mut e = edus(1);
        e[0].text = "  ".into();
        let err = ConstituentTree::new("d", "g", e, Node::leaf(Role::Root, None, 1)).unwrap_err();
        assert!(matches!(err, Error::EmptySegment(_)));
    }

    #[test]
    fn relation_instances_count_multinuc_once() {
        let root = Node::internal(
            Role::Root,
            None,
            vec![
                Node::leaf(Role::Satellite, Some("context-background"), 1),
                Node::internal(
                    Role::Nucleus,
                    Some(SPAN),
                    vec![
                        Node::leaf(Role::Nucleus, Some("joint-list"), 2),
                        Node::leaf(Role::Nucleus, Some("joint-list"), 3),
                        Node::leaf(Role::Nucleus, Some("joint-list"), 4),
                    ],
                ),
            ],
        );
        let t = ConstituentTree::new("d", "g", edus(4), root).unwrap();
        let inst = t.relation_instances();
        assert_eq!(inst.len(), 2);
        assert_eq!(inst[0].nuclearity, Nuclearity::SN);
        assert_eq!(inst[1].nuclearity, Nuclearity::NN);
    }
}
