//! Division-span encoding: head-annotated trees as plain binary constituent
//! trees whose categories carry an `H_` flag on every child at or left of
//! its mother's head daughter.

use crate::error::{Error, Result};
use crate::hpsg::{join_chain, wrap_chain, HpsgNode, HpsgTree};
use crate::scoring::{is_empty_name, EMPTY_LABEL, HEAD_PREFIX};
use crate::tree::{ConstituentNode, ConstituentTree, Token};

/// A binary constituent tree over H-flagged, chain-collapsed categories.
///
/// Every token sits under exactly one label node `(LABEL (POS word))`;
/// a bare token is labeled with the empty category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisionTree {
    pub tree: ConstituentTree,
}

/// A node where the head could not be read off the H flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisionIssue {
    pub span: crate::tree::Span,
    pub message: String,
}

fn flagged(label: &str, head_side: bool) -> String {
    if head_side {
        format!("{HEAD_PREFIX}{label}")
    } else {
        label.to_string()
    }
}

fn relabel(node: ConstituentNode, label: String) -> ConstituentNode {
    match node {
        ConstituentNode::Internal { span, children, .. } => ConstituentNode::Internal {
            category: label,
            span,
            children,
        },
        leaf => leaf,
    }
}

/// Returns the encoded node and its unflagged label.
fn encode(node: &HpsgNode, tokens: &[Token]) -> (ConstituentNode, String) {
    let mut chain: Vec<&str> = Vec::new();
    let mut current = node;
    while current.children.len() == 1 {
        chain.push(&current.category);
        current = &current.children[0];
    }
    if current.is_preterminal() {
        let label = if chain.is_empty() {
            EMPTY_LABEL.to_string()
        } else {
            join_chain(&chain)
        };
        let index = current.span.start;
        let pre = ConstituentNode::preterminal(tokens[index - 1].pos.clone(), index);
        return (ConstituentNode::phrase(label.clone(), vec![pre]), label);
    }
    chain.push(&current.category);
    let label = join_chain(&chain);
    let head_daughter = current.head_daughter().expect("validated tree");
    let kids: Vec<ConstituentNode> = current
        .children
        .iter()
        .enumerate()
        .map(|(pos, child)| {
            let (encoded, base) = encode(child, tokens);
            relabel(encoded, flagged(&base, pos <= head_daughter))
        })
        .collect();
    (binarize(kids, label.clone()), label)
}

/// Right-branching binarization with empty-category intermediates.
fn binarize(mut kids: Vec<ConstituentNode>, label: String) -> ConstituentNode {
    if kids.len() <= 2 {
        return ConstituentNode::phrase(label, kids);
    }
    let first = kids.remove(0);
    let rest = binarize(kids, EMPTY_LABEL.to_string());
    ConstituentNode::phrase(label, vec![first, rest])
}

/// Encodes a single-headed tree. `#` nodes are ordinary categories here.
pub fn to_division(tree: &HpsgTree) -> Result<DivisionTree> {
    tree.root
        .check_structure(tree.len())
        .map_err(|m| Error::contract(format!("not a single-headed tree: {m}")))?;
    let (root, _) = encode(&tree.root, &tree.tokens);
    Ok(DivisionTree {
        tree: ConstituentTree::new(tree.tokens.clone(), root)?,
    })
}

fn split_flag(label: &str) -> (&str, bool) {
    match label.strip_prefix(HEAD_PREFIX) {
        Some(base) => (base, true),
        None => (label, false),
    }
}

/// Children of `node`, with empty-category intermediates spliced away.
fn gather<'a>(node: &'a ConstituentNode, out: &mut Vec<&'a ConstituentNode>) {
    for child in node.children() {
        let (base, _) = split_flag(child.category().unwrap_or_default());
        if child.span().len() > 1 && is_empty_name(base) && !child.is_preterminal() {
            gather(child, out);
        } else {
            out.push(child);
        }
    }
}

/// Decodes a node and reports whether it carries the H flag.
fn decode(
    node: &ConstituentNode,
    tokens: &[Token],
    issues: &mut Vec<DivisionIssue>,
) -> (HpsgNode, bool) {
    let label = node.category().unwrap_or_default();
    let (base, head_side) = split_flag(label);
    if node.is_preterminal() {
        // A bare POS node without a label above it.
        let index = node.span().start;
        return (HpsgNode::preterminal(tokens[index - 1].pos.clone(), index), false);
    }
    if let [only] = node.children() {
        if only.is_preterminal() {
            let index = only.span().start;
            let pre = HpsgNode::preterminal(tokens[index - 1].pos.clone(), index);
            if is_empty_name(base) {
                return (pre, head_side);
            }
            return (wrap_chain(base, index, vec![pre]), head_side);
        }
    }
    let mut parts = Vec::new();
    gather(node, &mut parts);
    let decoded: Vec<(HpsgNode, bool)> = parts.iter().map(|c| decode(c, tokens, issues)).collect();
    let head = match decoded.iter().rposition(|(_, h)| *h) {
        Some(pos) => decoded[pos].0.head,
        None => {
            issues.push(DivisionIssue {
                span: node.span(),
                message: format!("no {HEAD_PREFIX} child under {label}; using the leftmost child"),
            });
            decoded[0].0.head
        }
    };
    if is_empty_name(base) {
        issues.push(DivisionIssue {
            span: node.span(),
            message: format!("empty category {label} at the top of a phrase"),
        });
    }
    let children = decoded.into_iter().map(|(n, _)| n).collect();
    (wrap_chain(base, head, children), head_side)
}

/// Recovers heads from the H flags: the head daughter of a node is its last
/// H-flagged child once empty intermediates are spliced. Nodes without any
/// H child fall back to the leftmost child and are reported.
pub fn from_division(tree: &DivisionTree) -> Result<(HpsgTree, Vec<DivisionIssue>)> {
    let mut issues = Vec::new();
    let (root, _) = decode(&tree.tree.root, &tree.tree.tokens, &mut issues);
    let out = HpsgTree::new(tree.tree.tokens.clone(), root)?;
    Ok((out, issues))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fig2_hpsg;
    use crate::treebank::{read_bracketed, write_tree};

    fn fig2() -> HpsgTree {
        fig2_hpsg()
    }

    #[test]
    fn head_side_children_are_flagged() {
        let dt = to_division(&fig2()).unwrap();
        let text = write_tree(&dt.tree);
        // Federal Paper Board all sit at or left of the head of (1,3).
        assert!(
            text.starts_with("(S (H_NP (H_<E> (NNP Federal)) (<E> (H_<E> (NNP Paper)) (H_<E> (NNP Board))))"),
            "{text}"
        );
    }

    #[test]
    fn round_trip_figure() {
        let tree = fig2();
        let (back, issues) = from_division(&to_division(&tree).unwrap()).unwrap();
        assert!(issues.is_empty());
        assert!(back.same_structure(&tree));
        let np = &back.root.children[0];
        assert_eq!((np.span.start, np.span.end, np.head), (1, 3, 3));
    }

    #[test]
    fn unary_chain_keeps_head() {
        let tokens = vec![Token::new(1, "a", "P"), Token::new(2, "b", "Q")];
        let root = HpsgNode::phrase(
            "S",
            2,
            vec![
                HpsgNode::preterminal("P", 1),
                HpsgNode::phrase("VP", 2, vec![HpsgNode::phrase("V", 2, vec![HpsgNode::preterminal("Q", 2)])]),
            ],
        );
        let tree = HpsgTree::new(tokens, root).unwrap();
        let dt = to_division(&tree).unwrap();
        assert_eq!(write_tree(&dt.tree), "(S (H_<E> (P a)) (H_VP+V (Q b)))");
        let (back, _) = from_division(&dt).unwrap();
        assert_eq!(back, tree);
    }

    #[test]
    fn missing_flag_is_salvaged() {
        let text = "(S (NP (P a)) (VP (Q b)))";
        let tree = read_bracketed(text).unwrap().trees.remove(0);
        let (back, issues) = from_division(&DivisionTree { tree }).unwrap();
        assert_eq!(back.root.head, 1);
        assert_eq!(issues.len(), 1);
    }
}
