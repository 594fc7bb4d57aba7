//! Margin training of the linear scorer with Hamming-augmented decoding.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::linear::SentenceFeatures;
use super::{constituent_labeled_spans, CategoryVocab, LinearModel, DEFAULT_DIM, EMPTY_LABEL};
use crate::decode::{decode_division_augmented, decode_joint_augmented, DecodeConfig, DecoderKind, GoldSpans};
use crate::division::{to_division, DivisionTree};
use crate::error::{Error, Result};
use crate::hpsg::{project_dependencies, HpsgTree};
use crate::tree::{Span, Token};

#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub step: f64,
    pub lambda: f64,
    pub averaged: bool,
    pub seed: u64,
    pub dim: usize,
    /// `Joint` trains span and arc features; `Division` trains span
    /// features over head-flagged categories.
    pub decoder: DecoderKind,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 10,
            step: 0.1,
            lambda: 0.5,
            averaged: true,
            seed: 1,
            dim: DEFAULT_DIM,
            decoder: DecoderKind::Joint,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpochStats {
    /// 0 for the untrained model.
    pub epoch: usize,
    /// Sum over sentences of `max(0, max_T [s(T) + Δ(T)] - s(gold))`.
    pub objective: f64,
    /// Sentences whose margin was violated during the epoch.
    pub updates: usize,
}

enum Gold {
    Joint(HpsgTree),
    Division(DivisionTree),
}

struct Example {
    tokens: Vec<Token>,
    feats: SentenceFeatures,
    gold: Gold,
    spans: GoldSpans,
}

type Phi = Vec<(usize, f64)>;

fn span_phi(model: &LinearModel, feats: &SentenceFeatures, spans: &[(Span, String)], weight: f64, out: &mut Phi) {
    for (span, label) in spans {
        let id = model.vocab.id_or_empty(label);
        if span.len() > 1 && model.vocab.is_empty_label(id) {
            continue;
        }
        for f in feats.span(span.start, span.end) {
            out.push((model.span_slot(f, id), weight));
        }
    }
}

fn joint_phi(model: &LinearModel, feats: &SentenceFeatures, tree: &HpsgTree) -> Result<Phi> {
    let lambda = model.lambda;
    let mut phi = Vec::new();
    span_phi(model, feats, &tree.labeled_spans(EMPTY_LABEL), lambda, &mut phi);
    let deps = project_dependencies(tree)?;
    for (offset, &head) in deps.heads.iter().enumerate() {
        let child = offset + 1;
        let fired = if head == 0 {
            feats.root(child)
        } else {
            feats.arc(child, head)
        };
        for f in fired {
            phi.push((model.slot(f), 1.0 - lambda));
        }
    }
    Ok(phi)
}

fn division_phi(model: &LinearModel, feats: &SentenceFeatures, tree: &DivisionTree) -> Phi {
    let mut phi = Vec::new();
    span_phi(model, feats, &constituent_labeled_spans(&tree.tree.root), 1.0, &mut phi);
    phi
}

fn dot(weights: &[f64], phi: &Phi) -> f64 {
    phi.iter().map(|&(i, c)| weights[i] * c).sum()
}

fn gold_spans(vocab: &CategoryVocab, spans: &[(Span, String)]) -> GoldSpans {
    spans
        .iter()
        .map(|(s, l)| (s.start, s.end, vocab.id_or_empty(l)))
        .collect()
}

fn examples(corpus: &[HpsgTree], decoder: DecoderKind) -> Result<(Vec<Example>, CategoryVocab)> {
    match decoder {
        DecoderKind::Joint => {
            let vocab = CategoryVocab::for_hpsg(corpus);
            let out = corpus
                .iter()
                .map(|t| Example {
                    tokens: t.tokens.clone(),
                    feats: SentenceFeatures::new(&t.tokens),
                    spans: gold_spans(&vocab, &t.labeled_spans(EMPTY_LABEL)),
                    gold: Gold::Joint(t.clone()),
                })
                .collect();
            Ok((out, vocab))
        }
        DecoderKind::Division => {
            let trees = corpus.iter().map(to_division).collect::<Result<Vec<_>>>()?;
            let vocab = CategoryVocab::for_division(&trees);
            let out = trees
                .into_iter()
                .map(|t| Example {
                    tokens: t.tree.tokens.clone(),
                    feats: SentenceFeatures::new(&t.tree.tokens),
                    spans: gold_spans(&vocab, &constituent_labeled_spans(&t.tree.root)),
                    gold: Gold::Division(t),
                })
                .collect();
            Ok((out, vocab))
        }
        DecoderKind::Eisner => Err(Error::Config(
            "training needs the joint or division decoder".to_string(),
        )),
    }
}

/// Loss-augmented decode: returns the hinge term and the features of the
/// gold and predicted trees, or `None` features when gold already wins.
fn violation(model: &LinearModel, ex: &Example) -> Result<(f64, Option<(Phi, Phi)>)> {
    let cfg = DecodeConfig::with_lambda(model.lambda)?;
    match &ex.gold {
        Gold::Joint(gold) => {
            let table = model.table_for(&ex.feats, true);
            let (pred, augmented) = decode_joint_augmented(&ex.tokens, &table, &model.vocab, &cfg, &ex.spans)?;
            let gold_phi = joint_phi(model, &ex.feats, gold)?;
            let loss = (augmented - dot(&model.weights, &gold_phi)).max(0.0);
            if pred.same_structure(gold) || loss <= 1e-12 {
                return Ok((loss, None));
            }
            let pred_phi = joint_phi(model, &ex.feats, &pred)?;
            Ok((loss, Some((gold_phi, pred_phi))))
        }
        Gold::Division(gold) => {
            let table = model.table_for(&ex.feats, false);
            let (pred, augmented) = decode_division_augmented(&ex.tokens, &table, &model.vocab, Some(&ex.spans))?;
            let gold_phi = division_phi(model, &ex.feats, gold);
            let loss = (augmented - dot(&model.weights, &gold_phi)).max(0.0);
            if pred == *gold || loss <= 1e-12 {
                return Ok((loss, None));
            }
            let pred_phi = division_phi(model, &ex.feats, &pred);
            Ok((loss, Some((gold_phi, pred_phi))))
        }
    }
}

fn objective(model: &LinearModel, examples: &[Example]) -> Result<f64> {
    examples.iter().map(|ex| violation(model, ex).map(|v| v.0)).sum()
}

/// Hinge objective of `model` over a corpus.
pub fn hinge_objective(model: &LinearModel, corpus: &[HpsgTree]) -> Result<f64> {
    let (examples, _) = examples(corpus, model.decoder)?;
    objective(model, &examples)
}

/// Trains with the defaults of [`train_linear_with`] and no epoch callback.
pub fn train_linear(corpus: &[HpsgTree], config: &TrainConfig) -> Result<(LinearModel, Vec<EpochStats>)> {
    train_linear_with(corpus, config, |_, _| {})
}

/// Averaged structured perceptron on the margin constraint
/// `s(gold) >= s(T) + Δ(T, gold)`.
///
/// Each epoch visits the sentences in a seeded random order. After every
/// epoch, and once before training, `on_epoch` receives the statistics and
/// the model that would be returned at that point.
pub fn train_linear_with(
    corpus: &[HpsgTree],
    config: &TrainConfig,
    mut on_epoch: impl FnMut(&EpochStats, &LinearModel),
) -> Result<(LinearModel, Vec<EpochStats>)> {
    if corpus.is_empty() {
        return Err(Error::Config("empty training corpus".to_string()));
    }
    if !(config.step > 0.0 && config.step.is_finite()) {
        return Err(Error::Config(format!("step size {} must be positive", config.step)));
    }
    let (examples, vocab) = examples(corpus, config.decoder)?;
    let mut model = LinearModel::zeros(vocab, config.dim, config.lambda, config.decoder)?;
    // Running sum of step-weighted updates for averaging.
    let mut accumulated = vec![0.0; model.dim()];
    let mut count = 1.0;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut order: Vec<usize> = (0..examples.len()).collect();

    let snapshot = |model: &LinearModel, accumulated: &[f64], count: f64| {
        if !config.averaged {
            return model.clone();
        }
        let mut out = model.clone();
        for (w, a) in out.weights.iter_mut().zip(accumulated) {
            *w -= a / count;
        }
        out
    };

    let mut stats = Vec::with_capacity(config.epochs + 1);
    let initial = EpochStats {
        epoch: 0,
        objective: objective(&model, &examples)?,
        updates: 0,
    };
    log::info!("epoch 0 objective {:.6}", initial.objective);
    on_epoch(&initial, &model);
    stats.push(initial);

    for epoch in 1..=config.epochs {
        order.shuffle(&mut rng);
        let mut updates = 0;
        for &index in &order {
            let (_, features) = violation(&model, &examples[index])?;
            if let Some((gold, pred)) = features {
                updates += 1;
                for (sign, phi) in [(1.0, &gold), (-1.0, &pred)] {
                    for &(slot, c) in phi {
                        let delta = sign * config.step * c;
                        model.weights[slot] += delta;
                        accumulated[slot] += count * delta;
                    }
                }
            }
            count += 1.0;
        }
        let current = snapshot(&model, &accumulated, count);
        let epoch_stats = EpochStats {
            epoch,
            objective: objective(&current, &examples)?,
            updates,
        };
        log::info!(
            "epoch {epoch} objective {:.6} updates {updates}",
            epoch_stats.objective
        );
        on_epoch(&epoch_stats, &current);
        stats.push(epoch_stats);
    }
    Ok((snapshot(&model, &accumulated, count), stats))
}
