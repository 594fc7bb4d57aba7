//! Scorer contract: span-category scores `s(i, j, l)`, arc scores `d(r, h)`
//! and root scores, plus the oracle and linear scorers that produce them.

mod file;
mod linear;
mod train;

pub use file::{read_scores, write_scores};
pub use linear::{read_model, write_model, LinearModel, DEFAULT_DIM};
pub use train::{hinge_objective, train_linear, train_linear_with, EpochStats, TrainConfig};

use std::collections::HashMap;

use crate::division::DivisionTree;
use crate::error::{Error, Result};
use crate::hpsg::{project_dependencies, HpsgTree, SPLIT_CATEGORY};
use crate::tree::{ConstituentNode, ConstituentTree, Span};

/// Spelling of the empty category used to binarize n-ary nodes.
pub const EMPTY_LABEL: &str = "<E>";
/// Prefix marking daughters at or left of their mother's head.
pub const HEAD_PREFIX: &str = "H_";

/// True for the empty category and its head-marked variant.
pub fn is_empty_name(name: &str) -> bool {
    name == EMPTY_LABEL || name.strip_prefix(HEAD_PREFIX) == Some(EMPTY_LABEL)
}

/// Bijection between category strings and dense ids.
///
/// Id 0 is always the empty category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryVocab {
    names: Vec<String>,
    ids: HashMap<String, usize>,
}

impl Default for CategoryVocab {
    fn default() -> Self {
        Self::new()
    }
}

impl CategoryVocab {
    pub const EMPTY_ID: usize = 0;

    /// Vocabulary for head-annotated trees: `<E>` and `#` are reserved.
    pub fn new() -> Self {
        Self::from_names([EMPTY_LABEL, SPLIT_CATEGORY])
    }

    /// Vocabulary for division trees: `<E>`, `H_<E>`, `#` and `H_#` are reserved.
    pub fn division() -> Self {
        let h_empty = format!("{HEAD_PREFIX}{EMPTY_LABEL}");
        let h_split = format!("{HEAD_PREFIX}{SPLIT_CATEGORY}");
        Self::from_names([EMPTY_LABEL, h_empty.as_str(), SPLIT_CATEGORY, h_split.as_str()])
    }

    /// Builds a vocabulary from names in id order. `<E>` is prepended when
    /// the first name is not the empty category.
    pub fn from_names<'a>(names: impl IntoIterator<Item = &'a str>) -> Self {
        let mut vocab = CategoryVocab {
            names: Vec::new(),
            ids: HashMap::new(),
        };
        let mut names = names.into_iter().peekable();
        if names.peek() != Some(&EMPTY_LABEL) {
            vocab.intern(EMPTY_LABEL);
        }
        for name in names {
            vocab.intern(name);
        }
        vocab
    }

    pub fn intern(&mut self, name: &str) -> usize {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = self.names.len();
        self.names.push(name.to_string());
        self.ids.insert(name.to_string(), id);
        id
    }

    pub fn id(&self, name: &str) -> Option<usize> {
        self.ids.get(name).copied()
    }

    /// Unknown categories map to the empty category.
    pub fn id_or_empty(&self, name: &str) -> usize {
        self.id(name).unwrap_or(Self::EMPTY_ID)
    }

    pub fn name(&self, id: usize) -> &str {
        &self.names[id]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn is_empty_label(&self, id: usize) -> bool {
        is_empty_name(&self.names[id])
    }

    /// Collects every collapsed label of the given trees.
    pub fn for_hpsg<'a>(trees: impl IntoIterator<Item = &'a HpsgTree>) -> Self {
        let mut vocab = Self::new();
        for tree in trees {
            for (_, label) in tree.labeled_spans(EMPTY_LABEL) {
                vocab.intern(&label);
            }
        }
        vocab
    }

    pub fn for_division<'a>(trees: impl IntoIterator<Item = &'a DivisionTree>) -> Self {
        let mut vocab = Self::division();
        for tree in trees {
            for (_, label) in constituent_labeled_spans(&tree.tree.root) {
                vocab.intern(&label);
            }
        }
        vocab
    }
}

/// Dense scores for one sentence of `n` tokens.
///
/// Span rows are stored in offset-packed triangular order; arcs in an
/// `n x n` matrix indexed by (child, head).
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreTable {
    n: usize,
    labels: usize,
    spans: Vec<f64>,
    arcs: Vec<f64>,
    roots: Vec<f64>,
}

impl ScoreTable {
    pub fn zeros(n: usize, labels: usize) -> Self {
        ScoreTable {
            n,
            labels,
            spans: vec![0.0; Self::span_count(n) * labels],
            arcs: vec![0.0; n * n],
            roots: vec![0.0; n],
        }
    }

    /// Number of spans `(i, j)` with `1 <= i <= j <= n`.
    pub fn span_count(n: usize) -> usize {
        n * (n + 1) / 2
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn labels(&self) -> usize {
        self.labels
    }

    pub(crate) fn span_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(1 <= i && i <= j && j <= self.n, "span ({i},{j}) out of range");
        let row = i - 1;
        row * self.n - row * row.saturating_sub(1) / 2 + (j - i)
    }

    /// `s(i, j, label)`; labels beyond the table width read as 0.
    pub fn span(&self, i: usize, j: usize, label: usize) -> f64 {
        if label >= self.labels {
            return 0.0;
        }
        self.spans[self.span_index(i, j) * self.labels + label]
    }

    pub fn span_row(&self, i: usize, j: usize) -> &[f64] {
        let start = self.span_index(i, j) * self.labels;
        &self.spans[start..start + self.labels]
    }

    pub fn set_span(&mut self, i: usize, j: usize, label: usize, score: f64) {
        let index = self.span_index(i, j) * self.labels + label;
        self.spans[index] = score;
    }

    /// `d(child, head)`.
    pub fn arc(&self, child: usize, head: usize) -> f64 {
        self.arcs[(child - 1) * self.n + (head - 1)]
    }

    pub fn set_arc(&mut self, child: usize, head: usize, score: f64) {
        debug_assert_ne!(child, head);
        self.arcs[(child - 1) * self.n + (head - 1)] = score;
    }

    /// `d(head, root)`.
    pub fn root(&self, head: usize) -> f64 {
        self.roots[head - 1]
    }

    pub fn set_root(&mut self, head: usize, score: f64) {
        self.roots[head - 1] = score;
    }

    /// Widens the label dimension, filling new columns with 0.
    pub fn widen(&self, labels: usize) -> ScoreTable {
        if labels <= self.labels {
            return self.clone();
        }
        let mut out = ScoreTable::zeros(self.n, labels);
        for row in 0..Self::span_count(self.n) {
            out.spans[row * labels..row * labels + self.labels]
                .copy_from_slice(&self.spans[row * self.labels..(row + 1) * self.labels]);
        }
        out.arcs.clone_from(&self.arcs);
        out.roots.clone_from(&self.roots);
        out
    }

    /// Every entry drawn uniformly from `[low, high)`.
    pub fn uniform(n: usize, labels: usize, low: f64, high: f64, rng: &mut impl rand::Rng) -> Self {
        let mut table = ScoreTable::zeros(n, labels);
        for s in table.spans.iter_mut().chain(&mut table.arcs).chain(&mut table.roots) {
            *s = rng.gen_range(low..high);
        }
        for h in 0..n {
            table.arcs[h * n + h] = 0.0;
        }
        table
    }

    pub fn is_finite(&self) -> bool {
        self.spans.iter().chain(&self.arcs).chain(&self.roots).all(|s| s.is_finite())
    }
}

/// Labeled spans of a constituent tree with unary chains collapsed and
/// preterminals excluded; tokens with no phrase above the preterminal get
/// the empty category.
pub fn constituent_labeled_spans(root: &ConstituentNode) -> Vec<(Span, String)> {
    fn walk(node: &ConstituentNode, out: &mut Vec<(Span, String)>) {
        let mut chain: Vec<&str> = Vec::new();
        let mut current = node;
        while !current.is_preterminal() && current.children().len() == 1 {
            chain.push(current.category().expect("internal node"));
            current = &current.children()[0];
        }
        if current.is_preterminal() {
            let label = if chain.is_empty() {
                EMPTY_LABEL.to_string()
            } else {
                crate::hpsg::join_chain(&chain)
            };
            out.push((current.span(), label));
            return;
        }
        chain.push(current.category().expect("internal node"));
        out.push((current.span(), crate::hpsg::join_chain(&chain)));
        for child in current.children() {
            walk(child, out);
        }
    }
    let mut out = Vec::new();
    walk(root, &mut out);
    out
}

pub(crate) fn check_lambda(lambda: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Config(format!("lambda {lambda} outside [0, 1]")));
    }
    Ok(())
}

fn label_id(vocab: &CategoryVocab, label: &str, span: Span) -> Result<usize> {
    vocab
        .id(label)
        .ok_or_else(|| Error::contract(format!("category '{label}' at {span} is not in the vocabulary")))
}

fn sum_spans(spans: &[(Span, String)], table: &ScoreTable, vocab: &CategoryVocab) -> Result<f64> {
    let mut total = 0.0;
    for (span, label) in spans {
        if span.end > table.len() {
            return Err(Error::contract(format!(
                "span {span} outside a table of length {}",
                table.len()
            )));
        }
        let id = label_id(vocab, label, *span)?;
        if span.len() > 1 && vocab.is_empty_label(id) {
            continue;
        }
        total += table.span(span.start, span.end, id);
    }
    Ok(total)
}

/// `lambda * (sum of span scores) + (1 - lambda) * (sum of arc scores + root score)`.
///
/// Empty-category scores on spans longer than one token count as zero.
pub fn tree_score(tree: &HpsgTree, table: &ScoreTable, vocab: &CategoryVocab, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    if tree.len() != table.len() {
        return Err(Error::contract(format!(
            "tree has {} tokens, table {}",
            tree.len(),
            table.len()
        )));
    }
    let spans = sum_spans(&tree.labeled_spans(EMPTY_LABEL), table, vocab)?;
    let deps = project_dependencies(tree)?;
    let mut arcs = 0.0;
    for (offset, &head) in deps.heads.iter().enumerate() {
        arcs += if head == 0 {
            table.root(offset + 1)
        } else {
            table.arc(offset + 1, head)
        };
    }
    Ok(lambda * spans + (1.0 - lambda) * arcs)
}

/// `lambda * (sum of span scores)` for a tree without heads.
pub fn constituent_score(
    tree: &ConstituentTree,
    table: &ScoreTable,
    vocab: &CategoryVocab,
    lambda: f64,
) -> Result<f64> {
    check_lambda(lambda)?;
    if tree.len() != table.len() {
        return Err(Error::contract(format!(
            "tree has {} tokens, table {}",
            tree.len(),
            table.len()
        )));
    }
    Ok(lambda * sum_spans(&constituent_labeled_spans(&tree.root), table, vocab)?)
}

/// Sum of arc and root scores of a dependency tree.
pub fn dependency_score(heads: &[usize], table: &ScoreTable) -> f64 {
    heads
        .iter()
        .enumerate()
        .map(|(offset, &head)| {
            if head == 0 {
                table.root(offset + 1)
            } else {
                table.arc(offset + 1, head)
            }
        })
        .sum()
}

/// Scores 1 for every labeled span, arc and root of `gold`, 0 elsewhere.
pub fn oracle_scores(gold: &HpsgTree, vocab: &CategoryVocab) -> Result<ScoreTable> {
    let mut table = ScoreTable::zeros(gold.len(), vocab.len());
    for (span, label) in gold.labeled_spans(EMPTY_LABEL) {
        let id = label_id(vocab, &label, span)?;
        table.set_span(span.start, span.end, id, 1.0);
    }
    let deps = project_dependencies(gold)?;
    for (offset, &head) in deps.heads.iter().enumerate() {
        if head == 0 {
            table.set_root(offset + 1, 1.0);
        } else {
            table.set_arc(offset + 1, head, 1.0);
        }
    }
    Ok(table)
}

/// Span-only oracle over a division tree. Binarization nodes are not scored.
pub fn oracle_division_scores(tree: &DivisionTree, vocab: &CategoryVocab) -> Result<ScoreTable> {
    let mut table = ScoreTable::zeros(tree.tree.len(), vocab.len());
    for (span, label) in constituent_labeled_spans(&tree.tree.root) {
        let id = label_id(vocab, &label, span)?;
        if span.len() > 1 && vocab.is_empty_label(id) {
            continue;
        }
        table.set_span(span.start, span.end, id, 1.0);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fig2_hpsg;

    #[test]
    fn oracle_marks_gold_spans_and_arcs() {
        let gold = fig2_hpsg();
        let vocab = CategoryVocab::for_hpsg([&gold]);
        let table = oracle_scores(&gold, &vocab).unwrap();
        let np = vocab.id("NP").unwrap();
        let vp = vocab.id("VP").unwrap();
        assert_eq!(table.span(1, 3, np), 1.0);
        assert_eq!(table.span(1, 3, vp), 0.0);
        assert_eq!(table.arc(3, 4), 1.0);
        assert_eq!(table.arc(9, 4), 1.0);
        assert_eq!(table.root(4), 1.0);
        assert_eq!(table.root(3), 0.0);
    }

    #[test]
    fn lambda_extremes_drop_one_side() {
        let gold = fig2_hpsg();
        let vocab = CategoryVocab::for_hpsg([&gold]);
        let table = oracle_scores(&gold, &vocab).unwrap();
        let spans = tree_score(&gold, &table, &vocab, 1.0).unwrap();
        let arcs = tree_score(&gold, &table, &vocab, 0.0).unwrap();
        assert_eq!(arcs, 9.0);
        // Nine words, four phrases and one `#` group.
        assert_eq!(spans, 14.0);
        let c = crate::hpsg::project_constituents(&gold).unwrap();
        assert_eq!(constituent_score(&c, &table, &vocab, 1.0).unwrap(), 13.0);
        let half = tree_score(&gold, &table, &vocab, 0.5).unwrap();
        assert!((half - 0.5 * (spans + arcs)).abs() < 1e-12);
    }

    #[test]
    fn triangular_index_is_dense() {
        let table = ScoreTable::zeros(5, 1);
        let mut seen = Vec::new();
        for i in 1..=5 {
            for j in i..=5 {
                seen.push(table.span_index(i, j));
            }
        }
        seen.sort_unstable();
        assert_eq!(seen, (0..15).collect::<Vec<_>>());
        assert_eq!(ScoreTable::span_count(5), 15);
    }

    #[test]
    fn vocab_reserved_ids() {
        let v = CategoryVocab::new();
        assert_eq!(v.name(CategoryVocab::EMPTY_ID), EMPTY_LABEL);
        assert_eq!(v.id("#"), Some(1));
        let d = CategoryVocab::division();
        assert!(d.is_empty_label(0) && d.is_empty_label(1));
        assert!(!d.is_empty_label(2));
        assert_eq!(d.id_or_empty("NP"), 0);
    }

    #[test]
    fn missing_labels_read_zero() {
        let mut t = ScoreTable::zeros(2, 2);
        t.set_span(1, 2, 1, 3.0);
        assert_eq!(t.span(1, 2, 7), 0.0);
        let wide = t.widen(4);
        assert_eq!(wide.span(1, 2, 1), 3.0);
        assert_eq!(wide.labels(), 4);
    }
}
