//! Exact argmax decoders: constituent CKY, the joint span chart, first-order
//! Eisner, and an exhaustive search used as a test oracle.

mod brute;
mod cky;
mod eisner;
mod joint;

pub use brute::{brute_force, BRUTE_FORCE_CAP};
pub use cky::{decode_constituents, decode_division};
pub use eisner::decode_eisner;
pub use joint::{decode_joint, decode_joint_capped, DEFAULT_LEN_CAP};

pub(crate) use cky::decode_division_augmented;
pub(crate) use joint::decode_joint_augmented;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hpsg::{wrap_chain, HpsgNode};
use crate::scoring::{check_lambda, CategoryVocab, ScoreTable, HEAD_PREFIX};
use crate::tree::Token;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieBreak {
    /// Prefer the smaller split point, then the smaller sub-head, then the
    /// smaller category id.
    #[default]
    SmallestFirst,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecodeConfig {
    /// Weight of span scores; arc and root scores get `1 - lambda`.
    pub lambda: f64,
    pub tie_break: TieBreak,
}

impl Default for DecodeConfig {
    fn default() -> Self {
        DecodeConfig {
            lambda: 0.5,
            tie_break: TieBreak::SmallestFirst,
        }
    }
}

impl DecodeConfig {
    pub fn with_lambda(lambda: f64) -> Result<Self> {
        check_lambda(lambda)?;
        Ok(DecodeConfig {
            lambda,
            ..Default::default()
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecoderKind {
    Division,
    Joint,
    Eisner,
}

impl FromStr for DecoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "division" => Ok(DecoderKind::Division),
            "joint" => Ok(DecoderKind::Joint),
            "eisner" => Ok(DecoderKind::Eisner),
            other => Err(Error::Config(format!(
                "unknown decoder '{other}' (expected division, joint or eisner)"
            ))),
        }
    }
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecoderKind::Division => "division",
            DecoderKind::Joint => "joint",
            DecoderKind::Eisner => "eisner",
        })
    }
}

/// Gold labeled spans `(i, j, label)` for Hamming-augmented decoding.
pub(crate) type GoldSpans = HashSet<(usize, usize, usize)>;

/// Scores as the decoders see them: spans scaled by `lambda`, arcs by
/// `1 - lambda`, empty categories over two or more tokens pinned to 0, and
/// optionally +1 on every labeled span outside the gold tree.
pub(crate) struct Weighted<'a> {
    pub n: usize,
    table: &'a ScoreTable,
    vocab: &'a CategoryVocab,
    span_weight: f64,
    arc_weight: f64,
    gold: Option<&'a GoldSpans>,
}

impl<'a> Weighted<'a> {
    pub fn new(
        tokens: &[Token],
        table: &'a ScoreTable,
        vocab: &'a CategoryVocab,
        lambda: f64,
        gold: Option<&'a GoldSpans>,
    ) -> Result<Self> {
        check_lambda(lambda)?;
        check_input(tokens, table)?;
        if vocab.is_empty() {
            return Err(Error::contract("empty category vocabulary"));
        }
        Ok(Weighted {
            n: table.len(),
            table,
            vocab,
            span_weight: lambda,
            arc_weight: 1.0 - lambda,
            gold,
        })
    }

    pub fn labels(&self) -> usize {
        self.vocab.len()
    }

    pub fn is_empty_label(&self, label: usize) -> bool {
        self.vocab.is_empty_label(label)
    }

    pub fn is_head_flagged(&self, label: usize) -> bool {
        self.vocab.name(label).starts_with(HEAD_PREFIX)
    }

    pub fn span(&self, i: usize, j: usize, label: usize) -> f64 {
        if j > i && self.vocab.is_empty_label(label) {
            return 0.0;
        }
        let mut score = self.span_weight * self.table.span(i, j, label);
        if let Some(gold) = self.gold {
            if !gold.contains(&(i, j, label)) {
                score += 1.0;
            }
        }
        score
    }

    /// Best label among those accepted by `allowed`; ties go to the smaller id.
    pub fn best_label(&self, i: usize, j: usize, allowed: impl Fn(usize) -> bool) -> Option<(f64, usize)> {
        let mut best: Option<(f64, usize)> = None;
        for label in 0..self.labels() {
            if !allowed(label) {
                continue;
            }
            let score = self.span(i, j, label);
            if best.is_none_or(|(b, _)| score > b) {
                best = Some((score, label));
            }
        }
        best
    }

    pub fn arc(&self, child: usize, head: usize) -> f64 {
        self.arc_weight * self.table.arc(child, head)
    }

    pub fn root(&self, head: usize) -> f64 {
        self.arc_weight * self.table.root(head)
    }

    pub fn name(&self, label: usize) -> &str {
        self.vocab.name(label)
    }
}

pub(crate) fn check_input(tokens: &[Token], table: &ScoreTable) -> Result<()> {
    if table.is_empty() {
        return Err(Error::contract("cannot decode an empty sentence"));
    }
    if tokens.len() != table.len() {
        return Err(Error::contract(format!(
            "{} tokens but a score table of length {}",
            tokens.len(),
            table.len()
        )));
    }
    Ok(())
}

/// A binary derivation with a label and head on every node.
#[derive(Clone, Debug)]
pub(crate) enum Derivation {
    Leaf {
        index: usize,
        label: usize,
    },
    Node {
        head: usize,
        label: usize,
        children: Box<[Derivation; 2]>,
    },
}

impl Derivation {
    pub fn head(&self) -> usize {
        match self {
            Derivation::Leaf { index, .. } => *index,
            Derivation::Node { head, .. } => *head,
        }
    }
}

/// Turns a derivation into n-ary nodes, splicing empty-category nodes.
pub(crate) fn flatten(d: &Derivation, tokens: &[Token], w: &Weighted) -> Vec<HpsgNode> {
    match d {
        Derivation::Leaf { index, label } => {
            let pre = HpsgNode::preterminal(tokens[index - 1].pos.clone(), *index);
            if w.is_empty_label(*label) {
                vec![pre]
            } else {
                vec![wrap_chain(w.name(*label), *index, vec![pre])]
            }
        }
        Derivation::Node {
            head,
            label,
            children,
            ..
        } => {
            let mut kids = flatten(&children[0], tokens, w);
            kids.extend(flatten(&children[1], tokens, w));
            if w.is_empty_label(*label) {
                kids
            } else {
                vec![wrap_chain(w.name(*label), *head, kids)]
            }
        }
    }
}

/// Flattens a whole-sentence derivation into a single root node.
pub(crate) fn flatten_root(d: &Derivation, tokens: &[Token], w: &Weighted) -> HpsgNode {
    let mut nodes = flatten(d, tokens, w);
    if nodes.len() == 1 {
        return nodes.pop().unwrap();
    }
    // Only reachable if the root label is empty, which the decoders avoid
    // for sentences of two or more tokens.
    HpsgNode::phrase(w.name(0), d.head(), nodes)
}
