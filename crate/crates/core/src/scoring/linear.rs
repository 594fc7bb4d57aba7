//! Sparse linear scorer over hashed span, arc and root features.

use std::fmt::Write as _;

use super::{CategoryVocab, ScoreTable};
use crate::decode::DecoderKind;
use crate::error::{Error, Result};
use crate::tree::Token;

/// Default number of weights: 2^22.
pub const DEFAULT_DIM: usize = 1 << 22;

const MODEL_MAGIC: &str = "hpsg-linear-model 1";

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0100_0000_01b3);
    }
    hash
}

/// splitmix64 finalizer applied to an order-sensitive combination.
fn mix(a: u64, b: u64) -> u64 {
    let mut z = a.rotate_left(23) ^ b.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn feature(template: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(mix(0x5eed, template), |acc, &p| mix(acc, p))
}

fn bucket(distance: usize) -> u64 {
    match distance {
        0..=5 => distance as u64,
        6..=10 => 6,
        11..=20 => 7,
        _ => 8,
    }
}

/// Hashed word and POS identities with boundary symbols at 0 and n+1.
pub(crate) struct SentenceFeatures {
    n: usize,
    words: Vec<u64>,
    tags: Vec<u64>,
}

impl SentenceFeatures {
    pub fn new(tokens: &[Token]) -> Self {
        let boundary = fnv1a(b"<S>");
        let mut words = vec![boundary];
        let mut tags = vec![boundary];
        for token in tokens {
            words.push(fnv1a(token.form.to_lowercase().as_bytes()));
            tags.push(fnv1a(token.pos.as_bytes()));
        }
        let end = fnv1a(b"</S>");
        words.push(end);
        tags.push(end);
        SentenceFeatures {
            n: tokens.len(),
            words,
            tags,
        }
    }

    /// Label-independent span features; each is conjoined with the label.
    pub fn span(&self, i: usize, j: usize) -> Vec<u64> {
        let (w, t) = (&self.words, &self.tags);
        let len = bucket(j - i + 1);
        let whole = u64::from(i == 1 && j == self.n);
        vec![
            feature(0, &[]),
            feature(1, &[len]),
            feature(2, &[w[i]]),
            feature(3, &[w[j]]),
            feature(4, &[t[i]]),
            feature(5, &[t[j]]),
            feature(6, &[t[i - 1]]),
            feature(7, &[t[j + 1]]),
            feature(8, &[w[i - 1]]),
            feature(9, &[w[j + 1]]),
            feature(10, &[t[i], t[j]]),
            feature(11, &[t[i - 1], t[i]]),
            feature(12, &[t[j], t[j + 1]]),
            feature(13, &[len, t[i], t[j]]),
            feature(14, &[whole, len]),
            feature(15, &[t[i - 1], t[j + 1]]),
            feature(16, &[w[i], t[j]]),
            feature(17, &[t[i], w[j]]),
        ]
    }

    pub fn arc(&self, child: usize, head: usize) -> Vec<u64> {
        let (w, t) = (&self.words, &self.tags);
        let (c, h) = (child, head);
        let dir = u64::from(c < h);
        let dist = bucket(c.abs_diff(h));
        let feats = [
            feature(100, &[]),
            feature(101, &[w[h]]),
            feature(102, &[t[h]]),
            feature(103, &[w[c]]),
            feature(104, &[t[c]]),
            feature(105, &[t[h], t[c]]),
            feature(106, &[w[h], t[h], t[c]]),
            feature(107, &[t[h], w[c], t[c]]),
            feature(108, &[w[h], w[c]]),
            feature(109, &[t[h], t[c], dist]),
            feature(110, &[dist]),
            feature(111, &[t[h], t[h + 1], t[c - 1], t[c]]),
            feature(112, &[t[h - 1], t[h], t[c], t[c + 1]]),
            feature(113, &[t[h], t[h + 1], t[c], t[c + 1]]),
            feature(114, &[t[h - 1], t[h], t[c - 1], t[c]]),
        ];
        feats.iter().map(|&f| mix(f, dir)).collect()
    }

    pub fn root(&self, head: usize) -> Vec<u64> {
        let (w, t) = (&self.words, &self.tags);
        let h = head;
        vec![
            feature(200, &[]),
            feature(201, &[t[h]]),
            feature(202, &[w[h]]),
            feature(203, &[t[h - 1], t[h]]),
            feature(204, &[t[h], t[h + 1]]),
            feature(205, &[u64::from(h == 1), u64::from(h == self.n)]),
        ]
    }
}

/// Linear scorer: every table entry is the dot product of the weights with
/// the entry's hashed feature vector.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub vocab: CategoryVocab,
    /// Span weight the model was trained with.
    pub lambda: f64,
    pub decoder: DecoderKind,
}

impl LinearModel {
    pub fn zeros(vocab: CategoryVocab, dim: usize, lambda: f64, decoder: DecoderKind) -> Result<Self> {
        if !dim.is_power_of_two() {
            return Err(Error::Config(format!("feature dimension {dim} is not a power of two")));
        }
        super::check_lambda(lambda)?;
        Ok(LinearModel {
            weights: vec![0.0; dim],
            vocab,
            lambda,
            decoder,
        })
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    #[inline]
    pub(crate) fn slot(&self, feature: u64) -> usize {
        (feature as usize) & (self.weights.len() - 1)
    }

    #[inline]
    pub(crate) fn span_slot(&self, base: u64, label: usize) -> usize {
        self.slot(mix(base, label as u64 + 1))
    }

    /// Weight indices firing for span `(i, j)` with `label`.
    pub fn span_feature_indices(&self, tokens: &[Token], i: usize, j: usize, label: usize) -> Vec<usize> {
        SentenceFeatures::new(tokens)
            .span(i, j)
            .into_iter()
            .map(|f| self.span_slot(f, label))
            .collect()
    }

    /// Weight indices firing for the arc `child <- head`.
    pub fn arc_feature_indices(&self, tokens: &[Token], child: usize, head: usize) -> Vec<usize> {
        SentenceFeatures::new(tokens)
            .arc(child, head)
            .into_iter()
            .map(|f| self.slot(f))
            .collect()
    }

    pub fn root_feature_indices(&self, tokens: &[Token], head: usize) -> Vec<usize> {
        SentenceFeatures::new(tokens)
            .root(head)
            .into_iter()
            .map(|f| self.slot(f))
            .collect()
    }

    /// Span scores for every span and every label; arcs and roots are 0.
    pub fn score_spans(&self, tokens: &[Token]) -> ScoreTable {
        let feats = SentenceFeatures::new(tokens);
        self.spans_into(&feats, ScoreTable::zeros(tokens.len(), self.vocab.len()))
    }

    /// Arc and root scores; span scores are 0.
    pub fn score_arcs(&self, tokens: &[Token]) -> ScoreTable {
        let feats = SentenceFeatures::new(tokens);
        self.arcs_into(&feats, ScoreTable::zeros(tokens.len(), self.vocab.len()))
    }

    /// The complete table.
    pub fn score_table(&self, tokens: &[Token]) -> ScoreTable {
        let feats = SentenceFeatures::new(tokens);
        let table = self.spans_into(&feats, ScoreTable::zeros(tokens.len(), self.vocab.len()));
        self.arcs_into(&feats, table)
    }

    pub(crate) fn table_for(&self, feats: &SentenceFeatures, with_arcs: bool) -> ScoreTable {
        let table = self.spans_into(feats, ScoreTable::zeros(feats.n, self.vocab.len()));
        if with_arcs {
            self.arcs_into(feats, table)
        } else {
            table
        }
    }

    fn spans_into(&self, feats: &SentenceFeatures, mut table: ScoreTable) -> ScoreTable {
        let n = feats.n;
        for i in 1..=n {
            for j in i..=n {
                let base = feats.span(i, j);
                for label in 0..self.vocab.len() {
                    let s: f64 = base.iter().map(|&f| self.weights[self.span_slot(f, label)]).sum();
                    table.set_span(i, j, label, s);
                }
            }
        }
        table
    }

    fn arcs_into(&self, feats: &SentenceFeatures, mut table: ScoreTable) -> ScoreTable {
        let n = feats.n;
        for head in 1..=n {
            for child in 1..=n {
                if child != head {
                    let s: f64 = feats.arc(child, head).iter().map(|&f| self.weights[self.slot(f)]).sum();
                    table.set_arc(child, head, s);
                }
            }
            let s: f64 = feats.root(head).iter().map(|&f| self.weights[self.slot(f)]).sum();
            table.set_root(head, s);
        }
        table
    }
}

/// Serializes the model as text; only non-zero weights are listed.
pub fn write_model(model: &LinearModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MODEL_MAGIC}");
    let _ = writeln!(out, "dim {}", model.dim());
    let _ = writeln!(out, "lambda {:.16e}", model.lambda);
    let _ = writeln!(out, "decoder {}", model.decoder);
    let _ = writeln!(out, "labels {}", model.vocab.len());
    for name in model.vocab.names() {
        let _ = writeln!(out, "{name}");
    }
    let nonzero = model.weights.iter().filter(|w| **w != 0.0).count();
    let _ = writeln!(out, "weights {nonzero}");
    for (index, w) in model.weights.iter().enumerate() {
        if *w != 0.0 {
            let _ = writeln!(out, "{index} {w:.16e}");
        }
    }
    out
}

pub fn read_model(text: &str) -> Result<LinearModel> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end()));
    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| Error::parse(0, format!("model file ends before {what}")))
    };
    let (line, magic) = next("the header")?;
    if magic != MODEL_MAGIC {
        return Err(Error::parse(line, "not a linear model file"));
    }
    fn field<T: std::str::FromStr>(entry: (usize, &str), key: &str) -> Result<T> {
        let (line, text) = entry;
        text.strip_prefix(key)
            .and_then(|rest| rest.trim().parse().ok())
            .ok_or_else(|| Error::parse(line, format!("expected '{key} <value>'")))
    }
    let dim: usize = field(next("dim")?, "dim")?;
    let lambda: f64 = field(next("lambda")?, "lambda")?;
    let (line, decoder) = next("decoder")?;
    let decoder: DecoderKind = decoder
        .strip_prefix("decoder ")
        .ok_or_else(|| Error::parse(line, "expected 'decoder <kind>'"))?
        .parse()
        .map_err(|e: Error| Error::parse(line, e.to_string()))?;
    let count: usize = field(next("labels")?, "labels")?;
    let mut names = Vec::with_capacity(count);
    for _ in 0..count {
        names.push(next("a label")?.1.to_string());
    }
    let vocab = CategoryVocab::from_names(names.iter().map(String::as_str));
    if vocab.len() != count {
        return Err(Error::parse(line, "label list is not a valid vocabulary"));
    }
    let mut model = LinearModel::zeros(vocab, dim, lambda, decoder)?;
    let weights: usize = field(next("weights")?, "weights")?;
    for _ in 0..weights {
        let (line, entry) = next("a weight")?;
        let (index, value) = entry
            .split_once(' ')
            .ok_or_else(|| Error::parse(line, "expected '<index> <weight>'"))?;
        let index: usize = index.parse().map_err(|_| Error::parse(line, "bad weight index"))?;
        let value: f64 = value.parse().map_err(|_| Error::parse(line, "bad weight value"))?;
        if index >= dim || !value.is_finite() {
            return Err(Error::parse(line, "weight out of range"));
        }
        model.weights[index] = value;
    }
    Ok(model)
}
