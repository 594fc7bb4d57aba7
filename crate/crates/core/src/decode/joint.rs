//! Joint span decoding: spans and head words chosen together,
//! O(n⁵) time and O(n³) space.

use super::cky::{cky, nary_root};
use super::{flatten_root, DecodeConfig, Derivation, GoldSpans, Weighted};
use crate::error::{Error, Result};
use crate::hpsg::{HpsgNode, HpsgTree};
use crate::scoring::{CategoryVocab, ScoreTable};
use crate::tree::{ConstituentNode, Token};

/// Sentences longer than this fall back to constituent CKY plus head
/// assignment on the fixed tree.
pub const DEFAULT_LEN_CAP: usize = 240;

/// Complete (`s_c`) and incomplete (`s_i`) charts over `(i, j, h)` with
/// `i <= h <= j`, packed span by span.
pub(crate) struct JointChart {
    n: usize,
    /// First cell of each span's `h` run.
    offsets: Vec<usize>,
    complete: Vec<f64>,
    incomplete: Vec<f64>,
    /// Chosen split point and sub-head per cell.
    back: Vec<(u32, u32)>,
    /// Best label over all categories, and over non-empty ones, per span.
    any_label: Vec<usize>,
    full_label: Vec<usize>,
}

impl JointChart {
    fn new(n: usize) -> Self {
        let spans = ScoreTable::span_count(n);
        let mut offsets = Vec::with_capacity(spans);
        let mut total = 0;
        for i in 1..=n {
            for j in i..=n {
                offsets.push(total);
                total += j - i + 1;
            }
        }
        JointChart {
            n,
            offsets,
            complete: vec![f64::NEG_INFINITY; total],
            incomplete: vec![f64::NEG_INFINITY; total],
            back: vec![(0, 0); total],
            any_label: vec![0; spans],
            full_label: vec![0; spans],
        }
    }

    #[inline]
    fn span(&self, i: usize, j: usize) -> usize {
        let row = i - 1;
        row * self.n - row * row.saturating_sub(1) / 2 + (j - i)
    }

    #[inline]
    fn cell(&self, i: usize, j: usize, h: usize) -> usize {
        self.offsets[self.span(i, j)] + (h - i)
    }

    /// Number of `(i, j, h)` cells.
    #[cfg(test)]
    pub fn cells(&self) -> usize {
        self.complete.len()
    }
}

// Index loops mirror the recurrences over (i, k, r, h).
#[allow(clippy::needless_range_loop)]
fn fill(w: &Weighted) -> JointChart {
    let n = w.n;
    let mut chart = JointChart::new(n);
    // Dense copy of the mixed arc scores, indexed [head][child].
    let mut arc = vec![0.0; (n + 1) * (n + 1)];
    for h in 1..=n {
        for r in 1..=n {
            if r != h {
                arc[h * (n + 1) + r] = w.arc(r, h);
            }
        }
    }
    for len in 1..=n {
        for i in 1..=n - len + 1 {
            let j = i + len - 1;
            let span = chart.span(i, j);
            let (any_score, any_label) = w.best_label(i, j, |_| true).expect("non-empty vocabulary");
            chart.any_label[span] = any_label;
            if len == 1 {
                let cell = chart.cell(i, i, i);
                chart.complete[cell] = any_score;
                chart.incomplete[cell] = any_score;
                chart.full_label[span] = any_label;
                continue;
            }
            let full = w.best_label(i, j, |l| !w.is_empty_label(l));
            let (full_score, full_label) = full.unwrap_or((f64::NEG_INFINITY, 0));
            chart.full_label[span] = full_label;
            for h in i..=j {
                let arcs = &arc[h * (n + 1)..(h + 1) * (n + 1)];
                let mut best = f64::NEG_INFINITY;
                let mut back = (0u32, 0u32);
                // Dependent on the left: [i, k] headed by r, [k+1, j] headed by h.
                for k in i..h {
                    let right = chart.incomplete[chart.cell(k + 1, j, h)];
                    let base = chart.cell(i, k, i);
                    for r in i..=k {
                        let s = chart.complete[base + (r - i)] + arcs[r] + right;
                        if s > best {
                            best = s;
                            back = (k as u32, r as u32);
                        }
                    }
                }
                // Dependent on the right: [i, k] headed by h, [k+1, j] headed by r.
                for k in h..j {
                    let left = chart.incomplete[chart.cell(i, k, h)];
                    let base = chart.cell(k + 1, j, k + 1);
                    for r in k + 1..=j {
                        let s = left + chart.complete[base + (r - k - 1)] + arcs[r];
                        if s > best {
                            best = s;
                            back = (k as u32, r as u32);
                        }
                    }
                }
                let cell = chart.cell(i, j, h);
                chart.complete[cell] = best + full_score;
                chart.incomplete[cell] = best + any_score;
                chart.back[cell] = back;
            }
        }
    }
    chart
}

fn backtrack(chart: &JointChart, i: usize, j: usize, h: usize, complete: bool) -> Derivation {
    let span = chart.span(i, j);
    if i == j {
        return Derivation::Leaf {
            index: i,
            label: chart.any_label[span],
        };
    }
    let label = if complete {
        chart.full_label[span]
    } else {
        chart.any_label[span]
    };
    let (k, r) = chart.back[chart.cell(i, j, h)];
    let (k, r) = (k as usize, r as usize);
    let children = if k < h {
        [backtrack(chart, i, k, r, true), backtrack(chart, k + 1, j, h, false)]
    } else {
        [backtrack(chart, i, k, h, false), backtrack(chart, k + 1, j, r, true)]
    };
    Derivation::Node {
        head: h,
        label,
        children: Box::new(children),
    }
}

fn run(w: &Weighted, tokens: &[Token]) -> Result<(HpsgTree, f64)> {
    let chart = fill(w);
    let n = w.n;
    let mut best = f64::NEG_INFINITY;
    let mut root = 0;
    for h in 1..=n {
        let s = chart.complete[chart.cell(1, n, h)] + w.root(h);
        if s > best {
            best = s;
            root = h;
        }
    }
    if !best.is_finite() {
        return Err(Error::contract(
            "no derivation: the vocabulary has no non-empty category or scores are not finite",
        ));
    }
    let derivation = backtrack(&chart, 1, n, root, true);
    let node = flatten_root(&derivation, tokens, w);
    Ok((HpsgTree::new(tokens.to_vec(), node)?, best))
}

/// Highest-scoring head-annotated tree under
/// `lambda * spans + (1 - lambda) * (arcs + root)`.
///
/// Dependents are complete constituents: over two or more tokens they carry
/// a non-empty category. The sentence span is complete as well.
pub fn decode_joint(
    tokens: &[Token],
    table: &ScoreTable,
    vocab: &CategoryVocab,
    cfg: &DecodeConfig,
) -> Result<(HpsgTree, f64)> {
    let w = Weighted::new(tokens, table, vocab, cfg.lambda, None)?;
    run(&w, tokens)
}

pub(crate) fn decode_joint_augmented(
    tokens: &[Token],
    table: &ScoreTable,
    vocab: &CategoryVocab,
    cfg: &DecodeConfig,
    gold: &GoldSpans,
) -> Result<(HpsgTree, f64)> {
    let w = Weighted::new(tokens, table, vocab, cfg.lambda, Some(gold))?;
    run(&w, tokens)
}

/// Like [`decode_joint`], but sentences longer than `cap` are parsed with
/// span-only CKY and then given the best heads for that fixed tree. The
/// flag reports whether the fallback was used.
pub fn decode_joint_capped(
    tokens: &[Token],
    table: &ScoreTable,
    vocab: &CategoryVocab,
    cfg: &DecodeConfig,
    cap: usize,
) -> Result<(HpsgTree, f64, bool)> {
    let w = Weighted::new(tokens, table, vocab, cfg.lambda, None)?;
    if w.n <= cap {
        let (tree, score) = run(&w, tokens)?;
        return Ok((tree, score, false));
    }
    log::warn!(
        "sentence of {} tokens exceeds the length cap {cap}; using constituent CKY",
        w.n
    );
    let chart = cky(&w);
    let root = nary_root(&chart, &w, tokens, true);
    let heads = head_chart(&root, &w);
    let mut best = f64::NEG_INFINITY;
    let mut top = 0;
    for (offset, s) in heads.best.iter().enumerate() {
        let h = heads.start + offset;
        let s = s + w.root(h);
        if s > best {
            best = s;
            top = h;
        }
    }
    let node = assign_heads(&root, &heads, top, &w);
    Ok((HpsgTree::new(tokens.to_vec(), node)?, chart.score() + best, true))
}

/// Best arc score of a fixed subtree for every choice of its head word.
struct HeadChart {
    start: usize,
    best: Vec<f64>,
    kids: Vec<HeadChart>,
}

impl HeadChart {
    fn score(&self, h: usize) -> f64 {
        self.best[h - self.start]
    }

    /// Best head of this subtree when it attaches to `parent`.
    fn attach(&self, parent: usize, w: &Weighted) -> (usize, f64) {
        let mut best = (self.start, f64::NEG_INFINITY);
        for (offset, s) in self.best.iter().enumerate() {
            let h = self.start + offset;
            let s = s + w.arc(h, parent);
            if s > best.1 {
                best = (h, s);
            }
        }
        best
    }
}

fn head_chart(node: &ConstituentNode, w: &Weighted) -> HeadChart {
    let span = node.span();
    if node.is_preterminal() {
        return HeadChart {
            start: span.start,
            best: vec![0.0],
            kids: Vec::new(),
        };
    }
    let kids: Vec<HeadChart> = node.children().iter().map(|c| head_chart(c, w)).collect();
    let mut best = vec![0.0; span.len()];
    for (t, kid) in kids.iter().enumerate() {
        let kid_span = node.children()[t].span();
        for h in kid_span.tokens() {
            let mut s = kid.score(h);
            for (u, other) in kids.iter().enumerate() {
                if u != t {
                    s += other.attach(h, w).1;
                }
            }
            best[h - span.start] = s;
        }
    }
    HeadChart {
        start: span.start,
        best,
        kids,
    }
}

fn assign_heads(node: &ConstituentNode, chart: &HeadChart, head: usize, w: &Weighted) -> HpsgNode {
    let category = node.category().expect("internal node").to_string();
    if node.is_preterminal() {
        return HpsgNode::preterminal(category, head);
    }
    let children = node
        .children()
        .iter()
        .zip(&chart.kids)
        .map(|(child, kid)| {
            let h = if child.span().contains(head) {
                head
            } else {
                kid.attach(head, w).0
            };
            assign_heads(child, kid, h, w)
        })
        .collect();
    HpsgNode::phrase(category, head, children)
}
