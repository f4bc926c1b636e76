//! Shift-reduce transition system over EDUs.

use std::collections::HashMap;
use std::fmt;

use rstkit::binary::BinaryNode;
use rstkit::{BinaryTree, Edu, Nuclearity};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Transition {
    Shift,
    Reduce(Nuclearity, String),
}

impl Transition {
    /// Stable string id; ids order the actions for tie-breaking.
    pub fn id(&self) -> String {
        match self {
            Transition::Shift => "S".to_owned(),
            Transition::Reduce(n, l) => format!("R|{n}|{l}"),
        }
    }

    pub fn from_id(id: &str) -> Option<Transition> {
        if id == "S" {
            return Some(Transition::Shift);
        }
        let rest = id.strip_prefix("R|")?;
        let (n, l) = rest.split_once('|')?;
        Some(Transition::Reduce(n.parse().ok()?, l.to_owned()))
    }

    pub fn is_shift(&self) -> bool {
        matches!(self, Transition::Shift)
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transition::Shift => f.write_str("Shift"),
            Transition::Reduce(n, l) => write!(f, "Reduce({n}, {l})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ParserState {
    pub stack: Vec<BinaryNode>,
    /// Next EDU to shift (1-based); `n + 1` when the queue is empty.
    pub next: usize,
    pub n: usize,
    pub history: Vec<Transition>,
}

impl ParserState {
    pub fn new(n: usize) -> Self {
        ParserState {
            stack: Vec::new(),
            next: 1,
            n,
            history: Vec::new(),
        }
    }

    pub fn queue_len(&self) -> usize {
        self.n + 1 - self.next
    }

    pub fn queue_front(&self) -> Option<usize> {
        (self.next <= self.n).then_some(self.next)
    }

    /// Top of stack at depth `k` (0 = top).
    pub fn stack_item(&self, k: usize) -> Option<&BinaryNode> {
        self.stack.len().checked_sub(k + 1).map(|i| &self.stack[i])
    }

    pub fn can_shift(&self) -> bool {
        self.next <= self.n
    }

    pub fn can_reduce(&self) -> bool {
        self.stack.len() >= 2
    }

    pub fn is_terminal(&self) -> bool {
        self.stack.len() == 1 && !self.can_shift()
    }

    pub fn legal(&self, t: &Transition) -> bool {
        match t {
            Transition::Shift => self.can_shift(),
            Transition::Reduce(..) => self.can_reduce(),
        }
    }

    pub fn apply(&mut self, t: Transition) -> Result<()> {
        match &t {
            Transition::Shift => {
                if !self.can_shift() {
                    return Err(self.illegal(&t, "queue is empty"));
                }
                self.stack.push(BinaryNode::Leaf(self.next));
                self.next += 1;
            }
            Transition::Reduce(n, label) => {
                if !self.can_reduce() {
                    return Err(self.illegal(&t, "fewer than two stack items"));
                }
                let right = self.stack.pop().expect("checked depth");
                let left = self.stack.pop().expect("checked depth");
                self.stack.push(BinaryNode::join(*n, label.clone(), left, right));
            }
        }
        self.history.push(t);
        Ok(())
    }

    fn illegal(&self, t: &Transition, reason: &'static str) -> Error {
        Error::IllegalTransition {
            step: self.history.len(),
            action: t.to_string(),
            reason,
        }
    }

    pub fn finish(mut self) -> Result<BinaryNode> {
        if !self.is_terminal() {
            return Err(Error::NonTerminalEnd {
                stack: self.stack.len(),
                queue: self.queue_len(),
            });
        }
        Ok(self.stack.pop().expect("terminal state has one item"))
    }
}

/// Gold transition sequence: reduce the top two items when they are
/// siblings in `gold`, shift otherwise. Always 2n-1 long.
pub fn oracle(gold: &BinaryTree) -> Vec<Transition> {
    // (left span, right span) of each reduce.
    type Spans = ((usize, usize), (usize, usize));
    let mut parents: HashMap<Spans, Transition> = HashMap::new();
    fn index(node: &BinaryNode, out: &mut HashMap<Spans, Transition>) {
        if let BinaryNode::Internal(n) = node {
            out.insert(
                (n.left.span(), n.right.span()),
                Transition::Reduce(n.category, n.label.clone()),
            );
            index(&n.left, out);
            index(&n.right, out);
        }
    }
    index(&gold.root, &mut parents);

    let mut state = ParserState::new(gold.len());
    let mut seq = Vec::with_capacity(2 * gold.len());
    while !state.is_terminal() {
        let reduce = match (state.stack_item(1), state.stack_item(0)) {
            (Some(l), Some(r)) => parents.get(&(l.span(), r.span())).cloned(),
            _ => None,
        };
        let t = reduce.unwrap_or(Transition::Shift);
        state.apply(t.clone()).expect("oracle follows a valid tree");
        seq.push(t);
    }
    seq
}

/// Build the tree a transition sequence derives.
pub fn replay(doc_id: &str, genre: &str, edus: &[Edu], seq: &[Transition]) -> Result<BinaryTree> {
    let mut state = ParserState::new(edus.len());
    for t in seq {
        state.apply(t.clone())?;
    }
    let root = state.finish()?;
    Ok(BinaryTree::new(doc_id, genre, edus.to_vec(), root))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rstkit::binary::BinaryNode as B;

    fn edus(n: usize) -> Vec<Edu> {
        (1..=n).map(|i| Edu::new(i, format!("e{i}"))).collect()
    }

    #[test]
    fn single_edu() {
        let t = BinaryTree::new("d", "g", edus(1), B::Leaf(1));
        assert_eq!(oracle(&t), [Transition::Shift]);
    }

    #[test]
    fn ns_pair() {
        let t = BinaryTree::new(
            "d",
            "g",
            edus(2),
            B::join(Nuclearity::NS, "Elaboration", B::Leaf(1), B::Leaf(2)),
        );
        let seq = oracle(&t);
        assert_eq!(
            seq,
            [
                Transition::Shift,
                Transition::Shift,
                Transition::Reduce(Nuclearity::NS, "Elaboration".into())
            ]
        );
        assert_eq!(replay("d", "g", &t.edus, &seq).unwrap(), t);
    }

    #[test]
    fn illegal_sequences() {
        let r = Transition::Reduce(Nuclearity::NN, "Joint".into());
        assert!(matches!(
            replay("d", "g", &edus(2), &[r]),
            Err(Error::IllegalTransition { step: 0, .. })
        ));
        assert!(matches!(
            replay("d", "g", &edus(2), &[Transition::Shift]),
            Err(Error::NonTerminalEnd { stack: 1, queue: 1 })
        ));
        assert!(matches!(
            replay("d", "g", &edus(1), &[Transition::Shift, Transition::Shift]),
            Err(Error::IllegalTransition { step: 1, .. })
        ));
    }

    #[test]
    fn ids_round_trip() {
        for t in [Transition::Shift, Transition::Reduce(Nuclearity::SN, "Context".into())] {
            assert_eq!(Transition::from_id(&t.id()), Some(t));
        }
        assert!(Transition::from_id("R|XX|a").is_none());
    }
}
