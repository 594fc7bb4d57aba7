//! Head-annotated phrase structure trees.
//!
//! Every node carries a category and the index of its head word. A phrase
//! shares its head with exactly one child, its head daughter.

mod fuse;
mod project;

pub use fuse::{fuse, heads_of_spans, validate, HeadAuditReport};
pub use project::{project_constituents, project_dependencies};

use crate::error::{Error, Result};
use crate::tree::{check_tokens, Span, Token};

/// Category of the artificial node that splits a phrase into single-headed groups.
pub const SPLIT_CATEGORY: &str = "#";

/// Separator of collapsed unary chains, e.g. `S+VP`.
pub const CHAIN_SEPARATOR: char = '+';

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HpsgNode {
    pub category: String,
    /// 1-based index of the head word.
    pub head: usize,
    pub span: Span,
    /// Empty for preterminals, whose category is the POS tag.
    pub children: Vec<HpsgNode>,
}

impl HpsgNode {
    pub fn preterminal(pos: impl Into<String>, index: usize) -> Self {
        HpsgNode {
            category: pos.into(),
            head: index,
            span: Span::single(index),
            children: Vec::new(),
        }
    }

    /// Builds a phrase whose span is derived from its children.
    ///
    /// Panics if `children` is empty.
    pub fn phrase(category: impl Into<String>, head: usize, children: Vec<HpsgNode>) -> Self {
        let start = children.first().expect("phrase without children").span.start;
        let end = children.last().expect("phrase without children").span.end;
        HpsgNode {
            category: category.into(),
            head,
            span: Span::new(start, end),
            children,
        }
    }

    pub fn is_preterminal(&self) -> bool {
        self.children.is_empty()
    }

    pub fn is_split(&self) -> bool {
        self.category == SPLIT_CATEGORY
    }

    /// Position of the child whose head is this node's head.
    pub fn head_daughter(&self) -> Option<usize> {
        self.children.iter().position(|c| c.head == self.head)
    }

    /// Pre-order traversal.
    pub fn nodes(&self) -> Vec<&HpsgNode> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            out.push(node);
            stack.extend(node.children.iter().rev());
        }
        out
    }

    /// Labeled spans with unary chains collapsed into `+`-joined atoms.
    ///
    /// Length-one spans are always present: a token with no phrase above
    /// its preterminal gets `empty_label`.
    pub fn labeled_spans(&self, empty_label: &str) -> Vec<(Span, String)> {
        let mut out = Vec::new();
        collect_labeled(self, empty_label, &mut out);
        out
    }

    pub(crate) fn check_structure(&self, n: usize) -> Result<(), String> {
        let span = self.span;
        if span.start == 0 || span.end > n {
            return Err(format!("span {span} outside 1..{n}"));
        }
        if !span.contains(self.head) {
            return Err(format!("head {} outside span {span}", self.head));
        }
        if self.category.is_empty() {
            return Err(format!("empty category at {span}"));
        }
        if self.is_preterminal() {
            if span.len() != 1 {
                return Err(format!("preterminal {} covers {span}", self.category));
            }
            return Ok(());
        }
        let mut next = span.start;
        for child in &self.children {
            if child.span.start != next {
                return Err(format!("children of {}{span} do not partition it", self.category));
            }
            next = child.span.end + 1;
        }
        if next != span.end + 1 {
            return Err(format!("children of {}{span} do not partition it", self.category));
        }
        let daughter = self
            .children
            .iter()
            .find(|c| c.span.contains(self.head))
            .expect("partition covers the head");
        if daughter.head != self.head {
            return Err(format!(
                "{}{span} has head {} but its daughter {}{} has head {}",
                self.category, self.head, daughter.category, daughter.span, daughter.head
            ));
        }
        if self.is_split()
            && self.children.len() == 1
            && self.children[0].is_split()
        {
            return Err(format!("nested {SPLIT_CATEGORY} nodes over {span}"));
        }
        for child in &self.children {
            child.check_structure(n)?;
        }
        Ok(())
    }
}

fn collect_labeled(node: &HpsgNode, empty_label: &str, out: &mut Vec<(Span, String)>) {
    let mut chain: Vec<&str> = Vec::new();
    let mut current = node;
    while current.children.len() == 1 {
        chain.push(&current.category);
        current = &current.children[0];
    }
    if current.is_preterminal() {
        let label = if chain.is_empty() {
            empty_label.to_string()
        } else {
            join_chain(&chain)
        };
        out.push((current.span, label));
        return;
    }
    chain.push(&current.category);
    out.push((current.span, join_chain(&chain)));
    for child in &current.children {
        collect_labeled(child, empty_label, out);
    }
}

pub(crate) fn join_chain(parts: &[&str]) -> String {
    let mut label = String::new();
    for (i, part) in parts.iter().enumerate() {
        if i > 0 {
            label.push(CHAIN_SEPARATOR);
        }
        label.push_str(part);
    }
    label
}

/// Wraps `inner` in the unary chain spelled by a collapsed label such as
/// `S+VP`; every node of the chain gets `head`.
pub(crate) fn wrap_chain(label: &str, head: usize, inner: Vec<HpsgNode>) -> HpsgNode {
    let mut parts = label.rsplit(CHAIN_SEPARATOR);
    let mut node = HpsgNode::phrase(parts.next().expect("non-empty split"), head, inner);
    for part in parts {
        node = HpsgNode::phrase(part, head, vec![node]);
    }
    node
}

/// A simplified HPSG tree: phrase structure with a head word on every node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HpsgTree {
    pub tokens: Vec<Token>,
    pub root: HpsgNode,
    /// Dependency relation per token, carried through from the source treebank.
    pub labels: Vec<Option<String>>,
}

impl HpsgTree {
    /// Creates a tree after checking every structural invariant.
    pub fn new(tokens: Vec<Token>, root: HpsgNode) -> Result<Self> {
        let labels = vec![None; tokens.len()];
        Self::with_labels(tokens, root, labels)
    }

    pub fn with_labels(
        tokens: Vec<Token>,
        root: HpsgNode,
        labels: Vec<Option<String>>,
    ) -> Result<Self> {
        check_tokens(&tokens).map_err(Error::InvalidTree)?;
        let n = tokens.len();
        if labels.len() != n {
            return Err(Error::InvalidTree(format!("{n} tokens but {} labels", labels.len())));
        }
        if root.span != Span::new(1, n) {
            return Err(Error::InvalidTree(format!(
                "root spans {} but the sentence has {n} tokens",
                root.span
            )));
        }
        root.check_structure(n).map_err(Error::InvalidTree)?;
        Ok(HpsgTree {
            tokens,
            root,
            labels,
        })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn labeled_spans(&self, empty_label: &str) -> Vec<(Span, String)> {
        self.root.labeled_spans(empty_label)
    }

    /// Equality on structure, categories, heads and tokens, ignoring labels.
    pub fn same_structure(&self, other: &HpsgTree) -> bool {
        self.tokens == other.tokens && self.root == other.root
    }
}
