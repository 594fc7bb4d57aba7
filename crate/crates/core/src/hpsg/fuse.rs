use std::collections::{BTreeMap, BTreeSet};

use super::project::projected_heads;
use super::{HpsgNode, HpsgTree, SPLIT_CATEGORY};
use crate::error::{Error, Result};
use crate::tree::{ConstituentNode, ConstituentTree, DependencyTree, Span};

/// Outcome of fusing or validating one sentence.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HeadAuditReport {
    /// Sentence ordinal (1-based, 0 when unknown).
    pub sentence: usize,
    /// Phrases whose daughters did not all attach to a single head before
    /// `#` splitting.
    pub multi_head: usize,
    /// Phrases left inconsistent after splitting.
    pub residual: usize,
    /// Spans of the residual phrases.
    pub offending: Vec<Span>,
    /// Tokens whose dependency head is not reproduced by the fused tree.
    pub reattached: Vec<usize>,
}

impl HeadAuditReport {
    /// No residual phrase and every dependency reproduced.
    pub fn is_clean(&self) -> bool {
        self.residual == 0 && self.reattached.is_empty()
    }
}

fn check_aligned(c: &ConstituentTree, d: &DependencyTree) -> Result<()> {
    if c.len() != d.len() {
        return Err(Error::Alignment {
            sentence: 0,
            token: Some(c.len().min(d.len()) + 1),
            message: format!("{} constituent tokens vs {} dependency tokens", c.len(), d.len()),
        });
    }
    Ok(())
}

fn external(span: Span, heads: &[usize]) -> Vec<usize> {
    span.tokens()
        .filter(|&t| {
            let head = heads[t - 1];
            head == 0 || !span.contains(head)
        })
        .collect()
}

/// For every phrase span, the tokens inside it whose head lies outside.
pub fn heads_of_spans(
    c: &ConstituentTree,
    d: &DependencyTree,
) -> Result<BTreeMap<Span, BTreeSet<usize>>> {
    check_aligned(c, d)?;
    let mut out = BTreeMap::new();
    for node in c.root.internal_nodes() {
        if node.is_preterminal() {
            continue;
        }
        let span = node.span();
        let ext: BTreeSet<usize> = external(span, &d.heads).into_iter().collect();
        if ext.is_empty() {
            return Err(Error::contract(format!("span {span} has no external head")));
        }
        out.insert(span, ext);
    }
    Ok(out)
}

/// Combines a constituent tree and a dependency tree over the same tokens
/// into a head-annotated tree.
///
/// Phrases whose daughters attach to more than one head are regrouped under
/// `#` nodes so that every node has a single head. What cannot be regrouped
/// is flagged in the report and the phrase keeps its leftmost external head.
pub fn fuse(c: &ConstituentTree, d: &DependencyTree) -> Result<(HpsgTree, HeadAuditReport)> {
    check_aligned(c, d)?;
    let mut fuser = Fuser {
        heads: &d.heads,
        report: HeadAuditReport::default(),
    };
    let root = fuser.node(&c.root);
    let mut report = fuser.report;
    let tree = HpsgTree::with_labels(c.tokens.clone(), root, d.labels.clone())?;
    let projected = projected_heads(&tree.root, tree.len());
    report.reattached = projected
        .iter()
        .zip(&d.heads)
        .enumerate()
        .filter(|(_, (p, &h))| **p != Some(h))
        .map(|(offset, _)| offset + 1)
        .collect();
    Ok((tree, report))
}

struct Fuser<'a> {
    heads: &'a [usize],
    report: HeadAuditReport,
}

impl Fuser<'_> {
    fn dep(&self, token: usize) -> usize {
        self.heads[token - 1]
    }

    fn node(&mut self, node: &ConstituentNode) -> HpsgNode {
        let (category, span, children) = match node {
            ConstituentNode::Leaf(index) => return HpsgNode::preterminal("", *index),
            ConstituentNode::Internal {
                category,
                span,
                children,
            } => (category, *span, children),
        };
        if node.is_preterminal() {
            return HpsgNode::preterminal(category.clone(), span.start);
        }
        let kids: Vec<HpsgNode> = children.iter().map(|c| self.node(c)).collect();
        let ext = external(span, self.heads);
        if ext.len() < 2 {
            return self.arrange(category, span, kids, ext[0], true);
        }

        // Several words of the phrase attach outside it: cut the daughters
        // into maximal runs that each have one external head.
        self.report.multi_head += 1;
        let runs = self.split_runs(kids);
        let mut parts = Vec::with_capacity(runs.len());
        for mut run in runs {
            if run.len() == 1 {
                parts.push(run.pop().unwrap());
            } else {
                let run_span = Span::new(run[0].span.start, run.last().unwrap().span.end);
                let run_ext = external(run_span, self.heads);
                parts.push(self.arrange(SPLIT_CATEGORY, run_span, run, run_ext[0], false));
            }
        }
        let leftmost = ext[0];
        let head = parts
            .iter()
            .find(|p| p.span.contains(leftmost))
            .map(|p| p.head)
            .expect("parts cover the phrase");
        HpsgNode::phrase(category.clone(), head, parts)
    }

    fn split_runs(&self, kids: Vec<HpsgNode>) -> Vec<Vec<HpsgNode>> {
        let mut runs: Vec<Vec<HpsgNode>> = Vec::new();
        for kid in kids {
            let extend = match runs.last() {
                Some(run) => {
                    let candidate = Span::new(run[0].span.start, kid.span.end);
                    let run_span = Span::new(run[0].span.start, run.last().unwrap().span.end);
                    external(run_span, self.heads).len() == 1
                        && external(candidate, self.heads).len() == 1
                }
                None => false,
            };
            if extend {
                runs.last_mut().unwrap().push(kid);
            } else {
                runs.push(vec![kid]);
            }
        }
        runs
    }

    /// Arranges single-headed daughters so that every non-head daughter's
    /// head attaches to its mother's head, wrapping dependents' subtrees in
    /// `#` nodes where needed.
    fn arrange(
        &mut self,
        category: &str,
        span: Span,
        kids: Vec<HpsgNode>,
        external_head: usize,
        count: bool,
    ) -> HpsgNode {
        let m = kids
            .iter()
            .position(|k| k.span.contains(external_head))
            .expect("daughters cover the phrase");
        let head = kids[m].head;
        let mut offending = head != external_head;
        let mut flat = !offending;

        let mut parent: Vec<Option<usize>> = vec![None; kids.len()];
        for x in 0..kids.len() {
            if x == m {
                continue;
            }
            let target = self.dep(kids[x].head);
            if target == head {
                parent[x] = Some(m);
            } else if let Some(y) = kids.iter().position(|k| k.head == target) {
                parent[x] = Some(y);
                flat = false;
            } else {
                // Attaches to a non-head word of a sister, or leaves the phrase.
                parent[x] = Some(m);
                flat = false;
                offending = true;
            }
        }
        if count && !flat {
            self.report.multi_head += 1;
        }

        let members: Vec<usize> = (0..kids.len()).collect();
        let mut slots: Vec<Option<HpsgNode>> = kids.into_iter().map(Some).collect();
        let node = build(category, &mut slots, &members, m, &mut parent, &mut offending);
        debug_assert_eq!(node.span, span);
        if offending {
            self.report.residual += 1;
            self.report.offending.push(span);
        }
        node
    }
}

fn subtree(root: usize, members: &[usize], parent: &[Option<usize>]) -> Vec<usize> {
    let mut out = vec![root];
    let mut i = 0;
    while i < out.len() {
        let current = out[i];
        out.extend(members.iter().copied().filter(|&y| parent[y] == Some(current)));
        i += 1;
    }
    out.sort_unstable();
    out
}

fn build(
    category: &str,
    slots: &mut [Option<HpsgNode>],
    members: &[usize],
    head: usize,
    parent: &mut [Option<usize>],
    offending: &mut bool,
) -> HpsgNode {
    let dependents: Vec<usize> = members
        .iter()
        .copied()
        .filter(|&x| parent[x] == Some(head))
        .collect();
    let mut groups = Vec::new();
    for &x in &dependents {
        let sub = subtree(x, members, parent);
        let contiguous = sub.windows(2).all(|w| w[1] == w[0] + 1);
        if contiguous {
            groups.push(sub);
        } else {
            // Not expressible as nested groups: attach every member directly.
            *offending = true;
            for &y in &sub {
                parent[y] = Some(head);
                groups.push(vec![y]);
            }
        }
    }
    groups.push(vec![head]);
    groups.sort_unstable_by_key(|g| g[0]);

    let head_word = slots[head].as_ref().expect("unused daughter").head;
    let children: Vec<HpsgNode> = groups
        .into_iter()
        .map(|group| {
            if group.len() == 1 {
                slots[group[0]].take().expect("daughter used twice")
            } else {
                let sub_head = group
                    .iter()
                    .copied()
                    .find(|&y| y != head && parent[y].is_some_and(|p| !group.contains(&p)))
                    .expect("group has a root");
                build(SPLIT_CATEGORY, slots, &group, sub_head, parent, offending)
            }
        })
        .collect();
    HpsgNode::phrase(category.to_string(), head_word, children)
}

/// Structural check of a head-annotated tree.
///
/// Reports every node whose head lies outside its span, is not shared with
/// exactly one daughter, or whose recomputed set of externally attached
/// words differs from its head.
pub fn validate(tree: &HpsgTree) -> HeadAuditReport {
    let n = tree.len();
    let mut report = HeadAuditReport::default();
    let mut flagged: BTreeSet<Span> = BTreeSet::new();

    for node in tree.root.nodes() {
        let span = node.span;
        let mut ok = span.start >= 1 && span.end <= n && span.contains(node.head);
        if node.is_preterminal() {
            ok &= span.len() == 1;
        } else {
            let sharing = node
                .children
                .iter()
                .filter(|c| c.head == node.head && c.span.contains(node.head))
                .count();
            ok &= sharing == 1;
            let mut next = span.start;
            for child in &node.children {
                ok &= child.span.start == next;
                next = child.span.end + 1;
            }
            ok &= next == span.end + 1;
            ok &= !(node.is_split() && node.children.len() == 1 && node.children[0].is_split());
        }
        if !ok {
            flagged.insert(span);
        }
    }

    let projected = projected_heads(&tree.root, n);
    if let Some(heads) = projected.into_iter().collect::<Option<Vec<usize>>>() {
        for node in tree.root.nodes() {
            if node.is_preterminal() || node.span.end > n || node.span.start == 0 {
                continue;
            }
            let ext = external(node.span, &heads);
            if ext.len() >= 2 {
                report.multi_head += 1;
            }
            if ext != [node.head] {
                flagged.insert(node.span);
            }
        }
    } else {
        flagged.insert(tree.root.span);
    }

    report.residual = flagged.len();
    report.offending = flagged.into_iter().collect();
    report
}
