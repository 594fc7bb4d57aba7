//! Token sequences, constituent trees and dependency trees.
//!
//! All token indices are 1-based; `0` is reserved for the artificial
//! root in dependency heads.

use std::fmt;

use crate::error::{Error, Result};

/// A token of a sentence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Token {
    /// 1-based position in the sentence.
    pub index: usize,
    pub form: String,
    pub pos: String,
}

impl Token {
    pub fn new(index: usize, form: impl Into<String>, pos: impl Into<String>) -> Self {
        Token {
            index,
            form: form.into(),
            pos: pos.into(),
        }
    }
}

/// Checks that tokens are numbered 1..n and carry non-empty forms.
pub(crate) fn check_tokens(tokens: &[Token]) -> Result<(), String> {
    if tokens.is_empty() {
        return Err("sentence has no tokens".into());
    }
    for (offset, token) in tokens.iter().enumerate() {
        if token.index != offset + 1 {
            return Err(format!(
                "token {} has index {}, expected {}",
                offset + 1,
                token.index,
                offset + 1
            ));
        }
        if token.form.is_empty() {
            return Err(format!("token {} has an empty form", token.index));
        }
    }
    Ok(())
}

/// Closed interval `[start, end]` of 1-based token positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end, "empty span ({start},{end})");
        Span { start, end }
    }

    pub fn single(index: usize) -> Self {
        Span::new(index, index)
    }

    pub fn len(&self) -> usize {
        self.end + 1 - self.start
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, index: usize) -> bool {
        self.start <= index && index <= self.end
    }

    pub fn contains_span(&self, other: Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn tokens(&self) -> std::ops::RangeInclusive<usize> {
        self.start..=self.end
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.start, self.end)
    }
}

/// Node of a constituent tree.
///
/// A preterminal is an `Internal` node whose only child is a `Leaf`; its
/// category is the part-of-speech tag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstituentNode {
    Leaf(usize),
    Internal {
        category: String,
        span: Span,
        children: Vec<ConstituentNode>,
    },
}

impl ConstituentNode {
    pub fn preterminal(category: impl Into<String>, index: usize) -> Self {
        ConstituentNode::Internal {
            category: category.into(),
            span: Span::single(index),
            children: vec![ConstituentNode::Leaf(index)],
        }
    }

    /// Builds an internal node whose span is derived from its children.
    ///
    /// Panics if `children` is empty.
    pub fn phrase(category: impl Into<String>, children: Vec<ConstituentNode>) -> Self {
        let start = children.first().expect("phrase without children").span().start;
        let end = children.last().expect("phrase without children").span().end;
        ConstituentNode::Internal {
            category: category.into(),
            span: Span::new(start, end),
            children,
        }
    }

    pub fn span(&self) -> Span {
        match self {
            ConstituentNode::Leaf(index) => Span::single(*index),
            ConstituentNode::Internal { span, .. } => *span,
        }
    }

    pub fn category(&self) -> Option<&str> {
        match self {
            ConstituentNode::Leaf(_) => None,
            ConstituentNode::Internal { category, .. } => Some(category),
        }
    }

    pub fn children(&self) -> &[ConstituentNode] {
        match self {
            ConstituentNode::Leaf(_) => &[],
            ConstituentNode::Internal { children, .. } => children,
        }
    }

    pub fn is_preterminal(&self) -> bool {
        matches!(self, ConstituentNode::Internal { children, .. }
            if children.len() == 1 && matches!(children[0], ConstituentNode::Leaf(_)))
    }

    /// Pre-order traversal over internal nodes.
    pub fn internal_nodes(&self) -> Vec<&ConstituentNode> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            if let ConstituentNode::Internal { children, .. } = node {
                out.push(node);
                stack.extend(children.iter().rev());
            }
        }
        out
    }

    fn check(&self, n: usize) -> Result<(), String> {
        match self {
            ConstituentNode::Leaf(index) => {
                if *index == 0 || *index > n {
                    return Err(format!("leaf index {index} out of range 1..{n}"));
                }
            }
            ConstituentNode::Internal {
                category,
                span,
                children,
            } => {
                if category.is_empty() {
                    return Err(format!("empty category at {span}"));
                }
                if children.is_empty() {
                    return Err(format!("node {category}{span} has no children"));
                }
                let leaves = children
                    .iter()
                    .filter(|c| matches!(c, ConstituentNode::Leaf(_)))
                    .count();
                if leaves > 0 && children.len() > 1 {
                    return Err(format!("node {category}{span} mixes words and phrases"));
                }
                let mut next = span.start;
                for child in children {
                    let cs = child.span();
                    if cs.start != next {
                        return Err(format!(
                            "children of {category}{span} do not partition the span"
                        ));
                    }
                    next = cs.end + 1;
                    child.check(n)?;
                }
                if next != span.end + 1 {
                    return Err(format!(
                        "children of {category}{span} do not partition the span"
                    ));
                }
            }
        }
        Ok(())
    }
}

/// An n-ary phrase structure tree over a token sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstituentTree {
    pub tokens: Vec<Token>,
    pub root: ConstituentNode,
}

impl ConstituentTree {
    /// Creates a tree, checking that spans partition their parents and the
    /// root covers the whole sentence.
    pub fn new(tokens: Vec<Token>, root: ConstituentNode) -> Result<Self> {
        check_tokens(&tokens).map_err(Error::InvalidTree)?;
        if matches!(root, ConstituentNode::Leaf(_)) {
            return Err(Error::InvalidTree("root must be an internal node".into()));
        }
        let n = tokens.len();
        if root.span() != Span::new(1, n) {
            return Err(Error::InvalidTree(format!(
                "root spans {} but the sentence has {n} tokens",
                root.span()
            )));
        }
        root.check(n).map_err(Error::InvalidTree)?;
        Ok(ConstituentTree { tokens, root })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn forms(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.form.as_str()).collect()
    }
}

/// A single-rooted dependency tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependencyTree {
    pub tokens: Vec<Token>,
    /// `heads[k]` is the head of token `k + 1`; `0` marks the root.
    pub heads: Vec<usize>,
    /// Relation label per token, where present.
    pub labels: Vec<Option<String>>,
}

impl DependencyTree {
    /// Creates a tree, rejecting multiple roots and cycles.
    pub fn new(tokens: Vec<Token>, heads: Vec<usize>, labels: Vec<Option<String>>) -> Result<Self> {
        check_tokens(&tokens).map_err(Error::InvalidTree)?;
        if heads.len() != tokens.len() || labels.len() != tokens.len() {
            return Err(Error::InvalidTree(format!(
                "{} tokens but {} heads and {} labels",
                tokens.len(),
                heads.len(),
                labels.len()
            )));
        }
        check_heads(&heads).map_err(Error::InvalidTree)?;
        Ok(DependencyTree {
            tokens,
            heads,
            labels,
        })
    }

    pub fn unlabeled(tokens: Vec<Token>, heads: Vec<usize>) -> Result<Self> {
        let labels = vec![None; heads.len()];
        Self::new(tokens, heads, labels)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Head of the 1-based token `index` (0 for the root).
    pub fn head(&self, index: usize) -> usize {
        self.heads[index - 1]
    }

    pub fn root(&self) -> usize {
        self.heads.iter().position(|&h| h == 0).expect("validated tree has a root") + 1
    }

    pub fn has_labels(&self) -> bool {
        self.labels.iter().any(Option::is_some)
    }

    /// True when no two arcs cross.
    pub fn is_projective(&self) -> bool {
        is_projective(&self.heads)
    }
}

/// Validates a head vector: exactly one root, all heads in range, acyclic.
pub(crate) fn check_heads(heads: &[usize]) -> Result<(), String> {
    let n = heads.len();
    let roots = heads.iter().filter(|&&h| h == 0).count();
    if roots != 1 {
        return Err(format!("expected exactly one root, found {roots}"));
    }
    for (offset, &head) in heads.iter().enumerate() {
        if head > n {
            return Err(format!("token {} has head {head} outside 0..{n}", offset + 1));
        }
        if head == offset + 1 {
            return Err(format!("token {head} is its own head"));
        }
    }
    // Walk up from every token; a walk longer than n means a cycle.
    for start in 1..=n {
        let mut current = start;
        let mut steps = 0;
        while current != 0 {
            current = heads[current - 1];
            steps += 1;
            if steps > n {
                return Err(format!("cycle through token {start}"));
            }
        }
    }
    Ok(())
}

pub(crate) fn is_projective(heads: &[usize]) -> bool {
    let arcs: Vec<(usize, usize)> = heads
        .iter()
        .enumerate()
        .map(|(offset, &head)| {
            let child = offset + 1;
            (child.min(head), child.max(head))
        })
        .collect();
    for (a, &(l1, r1)) in arcs.iter().enumerate() {
        for &(l2, r2) in &arcs[a + 1..] {
            if (l1 < l2 && l2 < r1 && r1 < r2) || (l2 < l1 && l1 < r2 && r2 < r1) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(n: usize) -> Vec<Token> {
        (1..=n).map(|i| Token::new(i, format!("w{i}"), "X")).collect()
    }

    #[test]
    fn rejects_cycle() {
        let err = DependencyTree::unlabeled(toks(5), vec![0, 3, 2, 1, 1]).unwrap_err();
        assert!(err.to_string().contains("cycle"), "{err}");
    }

    #[test]
    fn rejects_two_roots() {
        assert!(DependencyTree::unlabeled(toks(3), vec![0, 0, 1]).is_err());
    }

    #[test]
    fn projectivity() {
        assert!(is_projective(&[2, 0, 2]));
        // 1 -> 3 crosses 2 -> 4
        assert!(!is_projective(&[3, 4, 0, 3]));
    }

    #[test]
    fn constituent_partition_is_checked() {
        let bad = ConstituentNode::Internal {
            category: "S".into(),
            span: Span::new(1, 2),
            children: vec![ConstituentNode::preterminal("A", 1)],
        };
        assert!(ConstituentTree::new(toks(2), bad).is_err());
        let good = ConstituentNode::phrase(
            "S",
            vec![
                ConstituentNode::preterminal("A", 1),
                ConstituentNode::preterminal("B", 2),
            ],
        );
        assert!(ConstituentTree::new(toks(2), good).is_ok());
    }
}
