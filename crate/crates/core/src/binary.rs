//! Binary RST trees and conversion to and from the n-ary form.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::tree::{ConstituentTree, Edu, Node, NodeBody, NodeShape, Nuclearity, Role, SPAN};

/// Direction in which multinuclear chains with more than two members nest.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branching {
    #[default]
    Right,
    Left,
}

#[derive(Clone, Debug)]
pub struct Internal {
    pub span: (usize, usize),
    pub category: Nuclearity,
    /// Satellite relation for NS/SN, shared relation for NN.
    pub label: String,
    pub left: BinaryNode,
    pub right: BinaryNode,
    /// Set by [`binarize`] when this node and its parent came from the same
    /// n-ary node. Ignored by equality.
    pub continues_parent: bool,
}

#[derive(Clone, Debug)]
pub enum BinaryNode {
    /// 1-based EDU index.
    Leaf(usize),
    Internal(Box<Internal>),
}

impl PartialEq for BinaryNode {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (BinaryNode::Leaf(a), BinaryNode::Leaf(b)) => a == b,
            (BinaryNode::Internal(a), BinaryNode::Internal(b)) => {
                a.span == b.span
                    && a.category == b.category
                    && a.label == b.label
                    && a.left == b.left
                    && a.right == b.right
            }
            _ => false,
        }
    }
}

impl Eq for BinaryNode {}

/// A node of the binary tree seen as a scoring unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Unit<'a> {
    pub span: (usize, usize),
    pub category: Nuclearity,
    pub label: &'a str,
}

impl BinaryNode {
    pub fn join(category: Nuclearity, label: impl Into<String>, left: BinaryNode, right: BinaryNode) -> Self {
        debug_assert_eq!(left.span().1 + 1, right.span().0, "children must be adjacent");
        BinaryNode::Internal(Box::new(Internal {
            span: (left.span().0, right.span().1),
            category,
            label: label.into(),
            left,
            right,
            continues_parent: false,
        }))
    }

    pub fn span(&self) -> (usize, usize) {
        match self {
            BinaryNode::Leaf(i) => (*i, *i),
            BinaryNode::Internal(n) => n.span,
        }
    }

    pub fn as_internal(&self) -> Option<&Internal> {
        match self {
            BinaryNode::Leaf(_) => None,
            BinaryNode::Internal(n) => Some(n),
        }
    }

    /// Head EDU reached by following nuclei (leftmost nucleus for NN).
    pub fn head(&self) -> usize {
        match self {
            BinaryNode::Leaf(i) => *i,
            BinaryNode::Internal(n) => match n.category {
                Nuclearity::NS | Nuclearity::NN => n.left.head(),
                Nuclearity::SN => n.right.head(),
            },
        }
    }

    /// Internal nodes in post-order.
    pub fn units(&self) -> Vec<Unit<'_>> {
        let mut out = Vec::new();
        self.collect_units(&mut out);
        out
    }

    fn collect_units<'a>(&'a self, out: &mut Vec<Unit<'a>>) {
        if let BinaryNode::Internal(n) = self {
            n.left.collect_units(out);
            n.right.collect_units(out);
            out.push(Unit {
                span: n.span,
                category: n.category,
                label: &n.label,
            });
        }
    }

    pub fn leaf_count(&self) -> usize {
        let (a, b) = self.span();
        b + 1 - a
    }

    /// Copy with every label rewritten by `f`.
    pub fn map_labels<E>(&self, f: &mut impl FnMut(&str) -> Result<String, E>) -> Result<BinaryNode, E> {
        Ok(match self {
            BinaryNode::Leaf(i) => BinaryNode::Leaf(*i),
            BinaryNode::Internal(n) => BinaryNode::Internal(Box::new(Internal {
                span: n.span,
                category: n.category,
                label: f(&n.label)?,
                left: n.left.map_labels(f)?,
                right: n.right.map_labels(f)?,
                continues_parent: n.continues_parent,
            })),
        })
    }
}

/// A binarized document.
#[derive(Clone, Debug)]
pub struct BinaryTree {
    pub doc_id: String,
    pub genre: String,
    pub edus: Vec<Edu>,
    pub root: BinaryNode,
    /// Chain direction used when continuation marks are absent.
    pub branching: Branching,
    /// True when `continues_parent` marks are authoritative, i.e. the tree
    /// came from [`binarize`]. Ignored by equality.
    pub chain_marks: bool,
}

impl PartialEq for BinaryTree {
    fn eq(&self, other: &Self) -> bool {
        self.doc_id == other.doc_id
            && self.genre == other.genre
            && self.edus == other.edus
            && self.root == other.root
            && self.branching == other.branching
    }
}

impl Eq for BinaryTree {}

impl BinaryTree {
    pub fn new(doc_id: impl Into<String>, genre: impl Into<String>, edus: Vec<Edu>, root: BinaryNode) -> Self {
        BinaryTree {
            doc_id: doc_id.into(),
            genre: genre.into(),
            edus,
            root,
            branching: Branching::Right,
            chain_marks: false,
        }
    }

    pub fn len(&self) -> usize {
        self.edus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edus.is_empty()
    }

    pub fn map_labels<E>(&self, mut f: impl FnMut(&str) -> Result<String, E>) -> Result<BinaryTree, E> {
        Ok(BinaryTree {
            root: self.root.map_labels(&mut f)?,
            ..self.clone()
        })
    }
}

pub fn binarize(tree: &ConstituentTree) -> BinaryTree {
    binarize_with(tree, Branching::Right)
}

/// Binarize an n-ary tree.
///
/// Multinuclear nodes with k children become a chain of k-1 NN nodes nested
/// in `branching` direction. Satellites of one nucleus bind closest first;
/// at equal distance the right satellite binds first.
pub fn binarize_with(tree: &ConstituentTree, branching: Branching) -> BinaryTree {
    BinaryTree {
        doc_id: tree.doc_id.clone(),
        genre: tree.genre.clone(),
        edus: tree.edus.clone(),
        root: binarize_node(&tree.root, branching),
        branching,
        chain_marks: true,
    }
}

fn mark(mut node: BinaryNode) -> BinaryNode {
    if let BinaryNode::Internal(n) = &mut node {
        n.continues_parent = true;
    }
    node
}

fn binarize_node(node: &Node, branching: Branching) -> BinaryNode {
    let kids = match &node.body {
        NodeBody::Edu(i) => return BinaryNode::Leaf(*i),
        NodeBody::Children(kids) => kids,
    };
    match node.shape().expect("internal node") {
        NodeShape::Multinuclear(label) => {
            let bins: Vec<BinaryNode> = kids.iter().map(|k| binarize_node(k, branching)).collect();
            match branching {
                Branching::Right => {
                    let mut iter = bins.into_iter().rev();
                    let mut acc = iter.next().expect("multinuclear node has children");
                    let mut first = true;
                    for left in iter {
                        let right = if first { acc } else { mark(acc) };
                        acc = BinaryNode::join(Nuclearity::NN, label, left, right);
                        first = false;
                    }
                    acc
                }
                Branching::Left => {
                    let mut iter = bins.into_iter();
                    let mut acc = iter.next().expect("multinuclear node has children");
                    let mut first = true;
                    for right in iter {
                        let left = if first { acc } else { mark(acc) };
                        acc = BinaryNode::join(Nuclearity::NN, label, left, right);
                        first = false;
                    }
                    acc
                }
            }
        }
        NodeShape::Mononuclear { nucleus } => {
            let mut order: Vec<usize> = (0..kids.len()).filter(|&i| i != nucleus).collect();
            // Closest first; ties go to the right-hand satellite.
            order.sort_by_key(|&i| (i.abs_diff(nucleus), i < nucleus));
            let mut acc = binarize_node(&kids[nucleus], branching);
            let mut first = true;
            for i in order {
                let sat = binarize_node(&kids[i], branching);
                let inner = if first { acc } else { mark(acc) };
                acc = if i > nucleus {
                    BinaryNode::join(Nuclearity::NS, kids[i].relation(), inner, sat)
                } else {
                    BinaryNode::join(Nuclearity::SN, kids[i].relation(), sat, inner)
                };
                first = false;
            }
            acc
        }
    }
}

/// Rebuild an n-ary tree.
///
/// Nodes marked by [`binarize`] merge back into their parent. Unmarked trees
/// (e.g. parser output) merge NN children with the parent's label on the
/// chain side given by `btree.branching`.
pub fn debinarize(btree: &BinaryTree) -> Result<ConstituentTree> {
    let marked = btree.chain_marks;
    let mut root = debinarize_node(&btree.root, marked, btree.branching);
    root.role = Role::Root;
    root.relation = None;
    ConstituentTree::new(btree.doc_id.clone(), btree.genre.clone(), btree.edus.clone(), root)
}

/// Whether `child` of NN node `parent` is a link of the same n-ary chain.
pub(crate) fn continues_chain(parent: &Internal, child: &BinaryNode, on_chain_side: bool, marked: bool) -> bool {
    match child {
        BinaryNode::Internal(c) if c.category == Nuclearity::NN && c.label == parent.label => {
            if marked {
                c.continues_parent
            } else {
                on_chain_side
            }
        }
        _ => false,
    }
}

/// Members of the multinuclear chain rooted at NN node `n`, left to right.
pub(crate) fn chain_members(n: &Internal, marked: bool, branching: Branching) -> Vec<&BinaryNode> {
    let mut out = Vec::new();
    for (child, side) in [
        (&n.left, branching == Branching::Left),
        (&n.right, branching == Branching::Right),
    ] {
        match child {
            BinaryNode::Internal(c) if continues_chain(n, child, side, marked) => {
                out.extend(chain_members(c, marked, branching))
            }
            _ => out.push(child),
        }
    }
    out
}

fn debinarize_node(node: &BinaryNode, marked: bool, branching: Branching) -> Node {
    let n = match node {
        BinaryNode::Leaf(i) => return Node::leaf(Role::Root, None, *i),
        BinaryNode::Internal(n) => n,
    };
    let mut kids = Vec::new();
    match n.category {
        Nuclearity::NN => {
            for child in chain_members(n, marked, branching) {
                let mut k = debinarize_node(child, marked, branching);
                k.role = Role::Nucleus;
                k.relation = Some(n.label.clone());
                kids.push(k);
            }
        }
        Nuclearity::NS | Nuclearity::SN => {
            let (nuc, sat) = if n.category == Nuclearity::NS {
                (&n.left, &n.right)
            } else {
                (&n.right, &n.left)
            };
            let nuc_merges = matches!(nuc, BinaryNode::Internal(c)
                if marked && c.continues_parent && c.category != Nuclearity::NN);
            let nuc_kids = if nuc_merges {
                match debinarize_node(nuc, marked, branching).body {
                    NodeBody::Children(c) => c,
                    NodeBody::Edu(_) => unreachable!(),
                }
            } else {
                let mut k = debinarize_node(nuc, marked, branching);
                k.role = Role::Nucleus;
                k.relation = Some(SPAN.to_owned());
                vec![k]
            };
            let mut s = debinarize_node(sat, marked, branching);
            s.role = Role::Satellite;
            s.relation = Some(n.label.clone());
            if n.category == Nuclearity::NS {
                kids.extend(nuc_kids);
                kids.push(s);
            } else {
                kids.push(s);
                kids.extend(nuc_kids);
            }
        }
    }
    Node::internal(Role::Root, None, kids)
}
