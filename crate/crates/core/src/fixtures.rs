//! Shared test data.

use crate::hpsg::{fuse, HpsgTree};
use crate::treebank::{read_bracketed, read_conll};

pub(crate) const FIG2_TREE: &str = "(S (NP (NNP Federal) (NNP Paper) (NNP Board)) \
    (VP (VBZ sells) (NP (NN paper) (CC and) (NN wood) (NNS products))) (. .))";

pub(crate) fn fig2_conll(products_head: usize) -> String {
    let rows = [
        ("Federal", "NNP", 3, "nn"),
        ("Paper", "NNP", 3, "nn"),
        ("Board", "NNP", 4, "nsubj"),
        ("sells", "VBZ", 0, "root"),
        ("paper", "NN", 4, "dobj"),
        ("and", "CC", 5, "cc"),
        ("wood", "NN", 8, "nn"),
        ("products", "NNS", products_head, "conj"),
        (".", ".", 4, "punct"),
    ];
    rows.iter()
        .enumerate()
        .map(|(i, (form, pos, head, rel))| {
            format!("{}\t{form}\t_\t{pos}\t{pos}\t_\t{head}\t{rel}\n", i + 1)
        })
        .collect()
}

/// The fused figure sentence with `products` attached to `paper`.
pub(crate) fn fig2_hpsg() -> HpsgTree {
    let c = read_bracketed(FIG2_TREE).unwrap().trees.remove(0);
    let d = read_conll(&fig2_conll(5)).unwrap().remove(0);
    fuse(&c, &d).unwrap().0
}
