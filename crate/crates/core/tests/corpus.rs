//! Checks over the whole bundled sample treebank.

mod common;

use std::collections::BTreeSet;

use hpsg::decode::{decode_division, decode_joint, DecodeConfig};
use hpsg::division::{from_division, to_division};
use hpsg::hpsg::{validate, HpsgNode};
use hpsg::scoring::{oracle_division_scores, oracle_scores, tree_score, CategoryVocab};
use hpsg::tree::DependencyTree;
use hpsg::treebank::{read_hpsg, write_hpsg};

#[test]
fn pair_count_matches_line_counts() {
    let (trees, deps) = common::sample_text();
    // One tree per line; dependency blocks end with a blank line.
    let tree_lines = trees.lines().filter(|l| l.starts_with('(')).count();
    let dep_blocks = deps.split("\n\n").filter(|b| !b.trim().is_empty()).count();
    assert_eq!(tree_lines, dep_blocks);
    assert_eq!(common::sample_pairs().len(), tree_lines);
    assert!(tree_lines >= 240);
}

#[test]
fn hpsg_serialization_is_idempotent() {
    let trees = common::sample_trees();
    let first = write_hpsg(&trees);
    let read = read_hpsg(&first).unwrap();
    assert_eq!(read.len(), trees.len());
    assert_eq!(write_hpsg(&read), first);
    for (a, b) in read.iter().zip(&trees) {
        assert!(a.same_structure(b));
    }
}

/// Phrases where some daughter's head word attaches inside the phrase but
/// not to the phrase head, or where the head word itself is not among the
/// words attaching outward.
fn inconsistent(node: &HpsgNode, d: &DependencyTree, out: &mut usize) {
    if node.is_preterminal() {
        return;
    }
    let outward: BTreeSet<usize> = node
        .span
        .tokens()
        .filter(|&t| d.head(t) == 0 || !node.span.contains(d.head(t)))
        .collect();
    let mut bad = !outward.contains(&node.head);
    for child in &node.children {
        let governor = d.head(child.head);
        if child.head != node.head && node.span.contains(governor) && governor != node.head {
            bad = true;
        }
    }
    *out += usize::from(bad);
    for child in &node.children {
        inconsistent(child, d, out);
    }
}

#[test]
fn audit_matches_independent_validator() {
    let pairs = common::sample_pairs();
    let (mut reported, mut recounted) = (0, 0);
    for (c, d) in &pairs {
        let (tree, report) = hpsg::hpsg::fuse(c, d).unwrap();
        reported += report.residual + validate(&tree).residual;
        let mut count = 0;
        inconsistent(&tree.root, d, &mut count);
        recounted += count;
        assert_eq!(report.residual, count, "sentence {}", tree.tokens[0].form);
    }
    assert_eq!(reported, recounted);
    assert_eq!(reported, 1);
}

#[test]
fn figure_sentence_is_split_and_kept() {
    let fused = common::sample_fused();
    let (tree, report) = &fused[0];
    assert_eq!(report.multi_head, 1);
    assert_eq!(report.residual, 0);
    // The second conjunct's outward arc is the one that moves.
    assert_eq!(report.reattached, vec![8]);
    let text = write_hpsg([tree]);
    assert!(text.contains("(NP[3] (NNP[1] Federal)"), "{text}");
}

#[test]
fn oracle_decoding_is_exact_with_both_decoders() {
    let trees = common::sample_trees();
    let vocab = CategoryVocab::for_hpsg(&trees);
    let cfg = DecodeConfig::default();
    for (offset, gold) in trees.iter().enumerate() {
        let table = oracle_scores(gold, &vocab).unwrap();
        let (pred, score) = decode_joint(&gold.tokens, &table, &vocab, &cfg).unwrap();
        assert!(pred.same_structure(gold), "joint, sentence {}", offset + 1);
        // Every distinct span scores 1 and every word attaches once.
        let spans: BTreeSet<_> = gold.root.nodes().iter().map(|n| n.span).collect();
        let expected = 0.5 * spans.len() as f64 + 0.5 * gold.len() as f64;
        assert!((score - expected).abs() < 1e-9, "sentence {}: {score} vs {expected}", offset + 1);
        assert!((tree_score(gold, &table, &vocab, 0.5).unwrap() - expected).abs() < 1e-9);
    }

    let divisions: Vec<_> = trees.iter().map(|t| to_division(t).unwrap()).collect();
    let vocab = CategoryVocab::for_division(&divisions);
    for (offset, (gold, division)) in trees.iter().zip(&divisions).enumerate() {
        let table = oracle_division_scores(division, &vocab).unwrap();
        let (pred, _) = decode_division(&gold.tokens, &table, &vocab).unwrap();
        assert_eq!(&pred, division, "division, sentence {}", offset + 1);
        let (back, issues) = from_division(&pred).unwrap();
        assert!(issues.is_empty());
        assert!(back.same_structure(gold), "sentence {}", offset + 1);
    }
}
