//! Constituent CKY over binary trees, O(n³·L).

use super::{GoldSpans, Weighted};
use crate::division::DivisionTree;
use crate::error::Result;
use crate::scoring::{CategoryVocab, ScoreTable};
use crate::tree::{ConstituentNode, ConstituentTree, Token};

pub(crate) struct CkyChart {
    n: usize,
    best: Vec<f64>,
    split: Vec<usize>,
    label: Vec<usize>,
}

impl CkyChart {
    fn index(&self, i: usize, j: usize) -> usize {
        let row = i - 1;
        row * self.n - row * row.saturating_sub(1) / 2 + (j - i)
    }

    pub fn score(&self) -> f64 {
        self.best[self.index(1, self.n)]
    }

    pub fn label(&self, i: usize, j: usize) -> usize {
        self.label[self.index(i, j)]
    }

    pub fn split(&self, i: usize, j: usize) -> usize {
        self.split[self.index(i, j)]
    }
}

/// Fills the chart. The sentence-level span may not carry a head flag and,
/// over two or more tokens, may not be empty.
pub(crate) fn cky(w: &Weighted) -> CkyChart {
    let n = w.n;
    let cells = ScoreTable::span_count(n);
    let mut chart = CkyChart {
        n,
        best: vec![f64::NEG_INFINITY; cells],
        split: vec![0; cells],
        label: vec![0; cells],
    };
    for len in 1..=n {
        for i in 1..=n - len + 1 {
            let j = i + len - 1;
            let is_root = len == n;
            let (label_score, label) = w
                .best_label(i, j, |l| {
                    !is_root || (!w.is_head_flagged(l) && (len == 1 || !w.is_empty_label(l)))
                })
                .expect("vocabulary has a non-empty, unflagged category");
            let mut inner = 0.0;
            let mut split = 0;
            if len > 1 {
                inner = f64::NEG_INFINITY;
                for k in i..j {
                    let s = chart.best[chart.index(i, k)] + chart.best[chart.index(k + 1, j)];
                    if s > inner {
                        inner = s;
                        split = k;
                    }
                }
            }
            let cell = chart.index(i, j);
            chart.best[cell] = inner + label_score;
            chart.split[cell] = split;
            chart.label[cell] = label;
        }
    }
    chart
}

fn build_binary(chart: &CkyChart, w: &Weighted, tokens: &[Token], i: usize, j: usize) -> ConstituentNode {
    let label = w.name(chart.label(i, j)).to_string();
    if i == j {
        let pre = ConstituentNode::preterminal(tokens[i - 1].pos.clone(), i);
        return ConstituentNode::phrase(label, vec![pre]);
    }
    let k = chart.split(i, j);
    let left = build_binary(chart, w, tokens, i, k);
    let right = build_binary(chart, w, tokens, k + 1, j);
    ConstituentNode::phrase(label, vec![left, right])
}

/// N-ary nodes of span `(i, j)`: empty categories are spliced and
/// collapsed chains expanded. `#` groups are spliced too unless kept.
fn build_nary(
    chart: &CkyChart,
    w: &Weighted,
    tokens: &[Token],
    (i, j): (usize, usize),
    keep_splits: bool,
) -> Vec<ConstituentNode> {
    let label = chart.label(i, j);
    let kids = if i == j {
        vec![ConstituentNode::preterminal(tokens[i - 1].pos.clone(), i)]
    } else {
        let k = chart.split(i, j);
        let mut kids = build_nary(chart, w, tokens, (i, k), keep_splits);
        kids.extend(build_nary(chart, w, tokens, (k + 1, j), keep_splits));
        kids
    };
    if w.is_empty_label(label) {
        return kids;
    }
    let mut nodes = kids;
    for part in w.name(label).rsplit(crate::hpsg::CHAIN_SEPARATOR) {
        if keep_splits || part != crate::hpsg::SPLIT_CATEGORY {
            nodes = vec![ConstituentNode::phrase(part, nodes)];
        }
    }
    nodes
}

pub(crate) fn nary_root(chart: &CkyChart, w: &Weighted, tokens: &[Token], keep_splits: bool) -> ConstituentNode {
    let mut nodes = build_nary(chart, w, tokens, (1, w.n), keep_splits);
    if nodes.len() == 1 {
        nodes.pop().unwrap()
    } else {
        // Only a spliced `#` root leaves several nodes; keep it as the root
        // the way projection does.
        let outer = w.name(chart.label(1, w.n)).split(crate::hpsg::CHAIN_SEPARATOR).next();
        ConstituentNode::phrase(outer.unwrap_or(crate::hpsg::SPLIT_CATEGORY), nodes)
    }
}

/// Highest-scoring binary tree over the division categories.
///
/// Returns the tree and the sum of its span scores.
pub fn decode_division(tokens: &[Token], table: &ScoreTable, vocab: &CategoryVocab) -> Result<(DivisionTree, f64)> {
    decode_division_augmented(tokens, table, vocab, None)
}

pub(crate) fn decode_division_augmented(
    tokens: &[Token],
    table: &ScoreTable,
    vocab: &CategoryVocab,
    gold: Option<&GoldSpans>,
) -> Result<(DivisionTree, f64)> {
    let w = Weighted::new(tokens, table, vocab, 1.0, gold)?;
    let chart = cky(&w);
    let root = build_binary(&chart, &w, tokens, 1, w.n);
    let tree = ConstituentTree::new(tokens.to_vec(), root)?;
    Ok((DivisionTree { tree }, chart.score()))
}

/// Highest-scoring n-ary constituent tree from span scores alone, with
/// empty-category nodes spliced. Returns the tree and its span score.
pub fn decode_constituents(
    tokens: &[Token],
    table: &ScoreTable,
    vocab: &CategoryVocab,
) -> Result<(ConstituentTree, f64)> {
    let w = Weighted::new(tokens, table, vocab, 1.0, None)?;
    let chart = cky(&w);
    // `#` groups have no constituent reading.
    let root = nary_root(&chart, &w, tokens, false);
    Ok((ConstituentTree::new(tokens.to_vec(), root)?, chart.score()))
}
