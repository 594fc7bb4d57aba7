#![allow(dead_code)]

use std::path::PathBuf;

use hpsg::hpsg::{fuse, HeadAuditReport, HpsgNode, HpsgTree};
use hpsg::tree::{ConstituentTree, DependencyTree, Token};
use hpsg::treebank::{pair_treebanks, read_bracketed, read_conll};
use rand::Rng;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn sample_text() -> (String, String) {
    let trees = std::fs::read_to_string(data_path("sample.mrg")).expect("sample trees");
    let deps = std::fs::read_to_string(data_path("sample.conll")).expect("sample dependencies");
    (trees, deps)
}

pub fn sample_pairs() -> Vec<(ConstituentTree, DependencyTree)> {
    let (trees, deps) = sample_text();
    let c = read_bracketed(&trees).unwrap().trees;
    let d = read_conll(&deps).unwrap();
    pair_treebanks(c, d).unwrap()
}

/// Every sample sentence fused, with its audit.
pub fn sample_fused() -> Vec<(HpsgTree, HeadAuditReport)> {
    sample_pairs()
        .iter()
        .map(|(c, d)| fuse(c, d).unwrap())
        .collect()
}

pub fn sample_trees() -> Vec<HpsgTree> {
    sample_fused().into_iter().map(|(t, _)| t).collect()
}

const CATEGORIES: [&str; 5] = ["NP", "VP", "S", "PP", "ADJP"];
const TAGS: [&str; 4] = ["DT", "NN", "VB", "IN"];

fn random_node(rng: &mut impl Rng, start: usize, end: usize) -> HpsgNode {
    let mut node = if start == end {
        HpsgNode::preterminal(TAGS[rng.gen_range(0..TAGS.len())], start)
    } else {
        let len = end - start + 1;
        let parts = rng.gen_range(2..=len.min(4));
        let mut cuts: Vec<usize> = rand::seq::index::sample(rng, len - 1, parts - 1)
            .into_iter()
            .map(|c| start + 1 + c)
            .collect();
        cuts.sort_unstable();
        let mut children = Vec::with_capacity(parts);
        let mut from = start;
        for cut in cuts.into_iter().chain([end + 1]) {
            children.push(random_node(rng, from, cut - 1));
            from = cut;
        }
        let head = children[rng.gen_range(0..children.len())].head;
        let category = if rng.gen_bool(0.15) {
            "#"
        } else {
            CATEGORIES[rng.gen_range(0..CATEGORIES.len())]
        };
        HpsgNode::phrase(category, head, children)
    };
    // Occasional unary chains above words and phrases.
    while rng.gen_bool(0.2) {
        let head = node.head;
        node = HpsgNode::phrase(CATEGORIES[rng.gen_range(0..CATEGORIES.len())], head, vec![node]);
    }
    node
}

/// A random well-formed head-annotated tree over `n` tokens.
pub fn random_tree(rng: &mut impl Rng, n: usize) -> HpsgTree {
    let tokens: Vec<Token> = (1..=n).map(|i| Token::new(i, format!("w{i}"), "X")).collect();
    let mut root = random_node(rng, 1, n);
    if root.is_split() {
        root.category = "S".to_string();
    }
    let mut tree_tokens = tokens;
    for node in root.nodes() {
        if node.is_preterminal() {
            tree_tokens[node.span.start - 1].pos = node.category.clone();
        }
    }
    HpsgTree::new(tree_tokens, root).expect("generated tree is well formed")
}
