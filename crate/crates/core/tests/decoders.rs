//! Decoders against exhaustive enumeration and against each other.

use hpsg::decode::{brute_force, decode_constituents, decode_eisner, decode_joint, DecodeConfig};
use hpsg::hpsg::project_constituents;
use hpsg::scoring::{dependency_score, CategoryVocab, ScoreTable};
use hpsg::tree::Token;
use hpsg::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LABELS: [&str; 5] = ["<E>", "#", "NP", "VP", "S"];

fn tokens(n: usize) -> Vec<Token> {
    (1..=n).map(|i| Token::new(i, format!("w{i}"), "X")).collect()
}

/// Every single-rooted projective head vector over `n` words.
fn projective_trees(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut heads = vec![0; n];
    fn fill(at: usize, n: usize, heads: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if at == n {
            if heads.iter().filter(|&&h| h == 0).count() == 1 && acyclic(heads) && projective(heads) {
                out.push(heads.clone());
            }
            return;
        }
        for h in 0..=n {
            if h != at + 1 {
                heads[at] = h;
                fill(at + 1, n, heads, out);
            }
        }
    }
    fill(0, n, &mut heads, &mut out);
    out
}

fn acyclic(heads: &[usize]) -> bool {
    (1..=heads.len()).all(|start| {
        let mut at = start;
        for _ in 0..=heads.len() {
            if at == 0 {
                return true;
            }
            at = heads[at - 1];
        }
        false
    })
}

fn projective(heads: &[usize]) -> bool {
    let arcs: Vec<(usize, usize)> = heads
        .iter()
        .enumerate()
        .map(|(i, &h)| if h == 0 { (0, i + 1) } else { ((i + 1).min(h), (i + 1).max(h)) })
        .collect();
    arcs.iter()
        .all(|&(a, b)| arcs.iter().all(|&(c, d)| !(a < c && c < b && b < d)))
}

#[test]
fn enumeration_counts_are_known() {
    // Single-rooted projective trees: 1, 2, 7, 30, 143.
    let counts: Vec<usize> = (1..=5).map(|n| projective_trees(n).len()).collect();
    assert_eq!(counts, vec![1, 2, 7, 30, 143]);
}

#[test]
fn eisner_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let trees: Vec<Vec<Vec<usize>>> = (0..=7).map(projective_trees).collect();
    for trial in 0..200 {
        let n = 2 + trial % 6;
        let table = ScoreTable::uniform(n, 1, -1.0, 1.0, &mut rng);
        let (tree, score) = decode_eisner(&tokens(n), &table).unwrap();
        let best = trees[n]
            .iter()
            .map(|h| dependency_score(h, &table))
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((score - best).abs() < 1e-9, "n={n}: {score} vs {best}");
        assert!((dependency_score(&tree.heads, &table) - score).abs() < 1e-9);
        assert!(tree.is_projective());
    }
}

#[test]
fn eisner_two_words() {
    let mut table = ScoreTable::zeros(2, 1);
    table.set_arc(1, 2, 0.3);
    table.set_root(2, 0.1);
    table.set_arc(2, 1, 0.2);
    table.set_root(1, 0.1);
    let (tree, score) = decode_eisner(&tokens(2), &table).unwrap();
    assert_eq!(tree.heads, vec![2, 0]);
    assert!((score - 0.4).abs() < 1e-12);
}

#[test]
fn span_only_joint_matches_constituent_cky() {
    let vocab = CategoryVocab::from_names(LABELS);
    let cfg = DecodeConfig::with_lambda(1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let n = rng.gen_range(1..=12);
        let table = ScoreTable::uniform(n, vocab.len(), -1.0, 1.0, &mut rng);
        let (joint, joint_score) = decode_joint(&tokens(n), &table, &vocab, &cfg).unwrap();
        let (cky, cky_score) = decode_constituents(&tokens(n), &table, &vocab).unwrap();
        assert!((joint_score - cky_score).abs() < 1e-9);
        assert_eq!(project_constituents(&joint).unwrap(), cky);
    }
}

#[test]
fn single_word_sentences() {
    let vocab = CategoryVocab::from_names(LABELS);
    let cfg = DecodeConfig::default();
    let mut table = ScoreTable::zeros(1, vocab.len());
    table.set_span(1, 1, 3, 0.8);
    table.set_span(1, 1, 2, 0.2);
    table.set_root(1, 0.6);
    let (tree, score) = decode_joint(&tokens(1), &table, &vocab, &cfg).unwrap();
    assert!((score - (0.5 * 0.8 + 0.5 * 0.6)).abs() < 1e-12);
    assert_eq!(tree.root.category, "VP");
    let (_, brute) = brute_force(&tokens(1), &table, &vocab, &cfg).unwrap();
    assert!((brute - score).abs() < 1e-12);
}

#[test]
fn empty_input_and_bad_lambda_are_rejected() {
    let vocab = CategoryVocab::from_names(LABELS);
    let table = ScoreTable::zeros(0, vocab.len());
    let err = decode_joint(&[], &table, &vocab, &DecodeConfig::default()).unwrap_err();
    assert!(matches!(err, Error::Contract(_)), "{err}");
    assert!(matches!(decode_eisner(&[], &table).unwrap_err(), Error::Contract(_)));
    assert!(matches!(DecodeConfig::with_lambda(1.5).unwrap_err(), Error::Config(_)));
}
