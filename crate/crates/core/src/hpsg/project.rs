use super::{HpsgNode, HpsgTree};
use crate::error::{Error, Result};
use crate::tree::{ConstituentNode, ConstituentTree, DependencyTree};

/// Drops heads and splices `#` nodes into their parents.
pub fn project_constituents(tree: &HpsgTree) -> Result<ConstituentTree> {
    let mut nodes = to_constituent(&tree.root);
    // The root itself is kept even when it is a `#` node.
    let root = if nodes.len() == 1 {
        nodes.pop().unwrap()
    } else {
        ConstituentNode::phrase(tree.root.category.clone(), nodes)
    };
    ConstituentTree::new(tree.tokens.clone(), root)
}

fn to_constituent(node: &HpsgNode) -> Vec<ConstituentNode> {
    if node.is_preterminal() {
        return vec![ConstituentNode::preterminal(node.category.clone(), node.span.start)];
    }
    let children: Vec<ConstituentNode> = node.children.iter().flat_map(to_constituent).collect();
    if node.is_split() {
        children
    } else {
        vec![ConstituentNode::phrase(node.category.clone(), children)]
    }
}

/// Reads the dependency tree off the head annotation: every non-head
/// daughter's head word depends on its mother's head word.
pub fn project_dependencies(tree: &HpsgTree) -> Result<DependencyTree> {
    let heads = projected_heads(&tree.root, tree.len());
    let heads = heads
        .into_iter()
        .enumerate()
        .map(|(offset, head)| {
            head.ok_or_else(|| Error::InvalidTree(format!("token {} receives no head", offset + 1)))
        })
        .collect::<Result<Vec<_>>>()?;
    DependencyTree::new(tree.tokens.clone(), heads, tree.labels.clone())
}

/// Head per token as implied by the head annotation, without validation.
pub(crate) fn projected_heads(root: &HpsgNode, n: usize) -> Vec<Option<usize>> {
    let mut heads = vec![None; n];
    if (1..=n).contains(&root.head) {
        heads[root.head - 1] = Some(0);
    }
    let mut stack = vec![root];
    while let Some(node) = stack.pop() {
        for child in &node.children {
            if child.head != node.head && (1..=n).contains(&child.head) {
                heads[child.head - 1] = Some(node.head);
            }
            stack.push(child);
        }
    }
    heads
}
