//! Constituent to dependency conversion.
//!
//! Heads propagate bottom-up: a leaf heads itself, NS/SN nodes take the head
//! of their nucleus and NN nodes the head of their left child (the leftmost
//! nucleus). At each node the head of the non-head child attaches to the head
//! of the node, labelled with the node's relation.

use crate::binary::{chain_members, BinaryNode, BinaryTree};
use crate::error::{Error, Result};
use crate::tree::Nuclearity;
use crate::treebank::{Arc, DepDocument, ROOT_LABEL};

pub fn to_dependencies(tree: &BinaryTree) -> DepDocument {
    let n = tree.edus.len();
    let mut heads = vec![(0usize, String::new()); n];
    let root = attach(&tree.root, tree, &mut heads);
    heads[root - 1] = (0, ROOT_LABEL.to_owned());
    let arcs = heads
        .into_iter()
        .enumerate()
        .map(|(i, (head, label))| Arc {
            dependent: i + 1,
            head,
            label,
        })
        .collect();
    DepDocument {
        doc_id: tree.doc_id.clone(),
        edus: tree.edus.clone(),
        arcs,
    }
}

/// Returns the head EDU of `node`, filling arcs for its dependents.
/// Multinuclear chains are flattened first, so every member attaches to the
/// leftmost member's head.
fn attach(node: &BinaryNode, tree: &BinaryTree, heads: &mut [(usize, String)]) -> usize {
    let n = match node {
        BinaryNode::Leaf(i) => return *i,
        BinaryNode::Internal(n) => n,
    };
    if n.category == Nuclearity::NN {
        let members = chain_members(n, tree.chain_marks, tree.branching);
        let member_heads: Vec<usize> = members.iter().map(|m| attach(m, tree, heads)).collect();
        let head = member_heads[0];
        for &h in &member_heads[1..] {
            heads[h - 1] = (head, n.label.clone());
        }
        return head;
    }
    let left = attach(&n.left, tree, heads);
    let right = attach(&n.right, tree, heads);
    let (head, dependent) = if n.category == Nuclearity::NS {
        (left, right)
    } else {
        (right, left)
    };
    heads[dependent - 1] = (head, n.label.clone());
    head
}

/// Central discourse unit: the EDU attached to the artificial root.
pub fn cdu(doc: &DepDocument) -> Result<usize> {
    doc.arcs
        .iter()
        .find(|a| a.head == 0)
        .map(|a| a.dependent)
        .ok_or(Error::NoRoot)
}

/// CDU accuracies reported for cross-corpus models, kept for reference only:
/// RST-DT model on GUM, GUM model on GUM, RST-DT model on RST-DT, GUM model on
/// RST-DT.
pub const REFERENCE_CDU_ACCURACY: [(&str, f64); 4] = [
    ("rstdt->gum", 0.042),
    ("gum->gum", 0.375),
    ("rstdt->rstdt", 0.842),
    ("gum->rstdt", 0.553),
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binary::BinaryNode as B;
    use crate::tree::Edu;

    fn doc(root: B, n: usize) -> DepDocument {
        let edus = (1..=n).map(|i| Edu::new(i, format!("e{i}"))).collect();
        to_dependencies(&BinaryTree::new("d", "g", edus, root))
    }

    fn arcs(d: &DepDocument) -> Vec<(usize, usize, &str)> {
        d.arcs.iter().map(|a| (a.dependent, a.head, a.label.as_str())).collect()
    }

    #[test]
    fn single_edu() {
        let d = doc(B::Leaf(1), 1);
        assert_eq!(arcs(&d), [(1, 0, "root")]);
        assert_eq!(cdu(&d).unwrap(), 1);
    }

    #[test]
    fn ns_pair() {
        let d = doc(B::join(Nuclearity::NS, "elaboration", B::Leaf(1), B::Leaf(2)), 2);
        assert_eq!(arcs(&d), [(1, 0, "root"), (2, 1, "elaboration")]);
        assert_eq!(cdu(&d).unwrap(), 1);
    }

    #[test]
    fn nn_chain_attaches_to_first_head() {
        let t = B::join(
            Nuclearity::NN,
            "joint-list",
            B::Leaf(1),
            B::join(Nuclearity::NN, "joint-list", B::Leaf(2), B::Leaf(3)),
        );
        let d = doc(t, 3);
        assert_eq!(arcs(&d), [(1, 0, "root"), (2, 1, "joint-list"), (3, 1, "joint-list")]);
    }

    #[test]
    fn satellite_of_satellite_uses_propagated_head() {
        // SN(1, NS(2, 3)): 3 attaches to 2, and 1 attaches to 2 (the head of the
        // nucleus span), not to the span node itself.
        let t = B::join(
            Nuclearity::SN,
            "context-background",
            B::Leaf(1),
            B::join(Nuclearity::NS, "elaboration-additional", B::Leaf(2), B::Leaf(3)),
        );
        let d = doc(t, 3);
        assert_eq!(
            arcs(&d),
            [
                (1, 2, "context-background"),
                (2, 0, "root"),
                (3, 2, "elaboration-additional")
            ]
        );
        d.validate().unwrap();
    }

    #[test]
    fn missing_root() {
        let mut d = doc(B::join(Nuclearity::NS, "elaboration", B::Leaf(1), B::Leaf(2)), 2);
        d.arcs[0].head = 2;
        assert!(matches!(cdu(&d), Err(Error::NoRoot)));
    }
}
