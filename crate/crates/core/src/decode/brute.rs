//! Exhaustive search over binary head-annotated derivations. Test oracle only.

use std::rc::Rc;

use super::{flatten_root, DecodeConfig, Derivation, Weighted};
use crate::error::{Error, Result};
use crate::hpsg::HpsgTree;
use crate::scoring::{tree_score, CategoryVocab, ScoreTable};
use crate::tree::Token;

/// Longest sentence the exhaustive search accepts.
pub const BRUTE_FORCE_CAP: usize = 8;

enum Shape {
    Leaf(usize),
    Node {
        head: usize,
        left: Rc<Shape>,
        right: Rc<Shape>,
    },
}

impl Shape {
    fn head(&self) -> usize {
        match self {
            Shape::Leaf(i) => *i,
            Shape::Node { head, .. } => *head,
        }
    }
}

type Shapes = Rc<Vec<Rc<Shape>>>;

/// Every binary bracketing of `[i, j]` with every choice of head child.
fn shapes(i: usize, j: usize, memo: &mut Vec<Vec<Option<Shapes>>>) -> Shapes {
    if let Some(done) = &memo[i][j] {
        return done.clone();
    }
    let mut out = Vec::new();
    if i == j {
        out.push(Rc::new(Shape::Leaf(i)));
    }
    for k in i..j {
        let lefts = shapes(i, k, memo);
        let rights = shapes(k + 1, j, memo);
        for left in lefts.iter() {
            for right in rights.iter() {
                for head in [left.head(), right.head()] {
                    out.push(Rc::new(Shape::Node {
                        head,
                        left: left.clone(),
                        right: right.clone(),
                    }));
                }
            }
        }
    }
    let out = Rc::new(out);
    memo[i][j] = Some(out.clone());
    out
}

#[derive(Clone, Copy, PartialEq)]
enum Role {
    Root,
    Dependent,
    HeadSide,
}

/// Labels a shape with the best category its role permits.
fn label(shape: &Shape, i: usize, j: usize, role: Role, w: &Weighted) -> Derivation {
    let single = i == j;
    let best = |allow_empty: bool| {
        w.best_label(i, j, |l| allow_empty || single || !w.is_empty_label(l))
            .expect("vocabulary has a non-empty category")
            .1
    };
    match shape {
        Shape::Leaf(index) => Derivation::Leaf {
            index: *index,
            label: best(true),
        },
        Shape::Node { head, left, right } => {
            let split = subtree_end(left);
            let (left_role, right_role) = if left.head() == *head {
                (Role::HeadSide, Role::Dependent)
            } else {
                (Role::Dependent, Role::HeadSide)
            };
            Derivation::Node {
                head: *head,
                label: best(role == Role::HeadSide),
                children: Box::new([
                    label(left, i, split, left_role, w),
                    label(right, split + 1, j, right_role, w),
                ]),
            }
        }
    }
}

fn subtree_end(shape: &Shape) -> usize {
    match shape {
        Shape::Leaf(i) => *i,
        Shape::Node { right, .. } => subtree_end(right),
    }
}

/// The true maximum of the joint objective by enumeration. Each candidate
/// is scored independently through [`tree_score`].
pub fn brute_force(
    tokens: &[Token],
    table: &ScoreTable,
    vocab: &CategoryVocab,
    cfg: &DecodeConfig,
) -> Result<(HpsgTree, f64)> {
    let n = table.len();
    if n > BRUTE_FORCE_CAP {
        return Err(Error::TooLong {
            n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let w = Weighted::new(tokens, table, vocab, cfg.lambda, None)?;
    let mut memo = vec![vec![None; n + 1]; n + 1];
    let mut best: Option<(HpsgTree, f64)> = None;
    for shape in shapes(1, n, &mut memo).iter() {
        let derivation = label(shape, 1, n, Role::Root, &w);
        let tree = HpsgTree::new(tokens.to_vec(), flatten_root(&derivation, tokens, &w))?;
        let score = tree_score(&tree, table, vocab, cfg.lambda)?;
        if best.as_ref().is_none_or(|(_, b)| score > *b) {
            best = Some((tree, score));
        }
    }
    Ok(best.expect("at least one shape"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(n: usize) -> Vec<Token> {
        (1..=n).map(|i| Token::new(i, format!("w{i}"), "P")).collect()
    }

    #[test]
    fn shape_counts() {
        // Catalan(n-1) bracketings times 2^(n-1) head choices.
        for (n, expected) in [(1, 1), (2, 2), (3, 8), (4, 40)] {
            let mut memo = vec![vec![None; n + 1]; n + 1];
            assert_eq!(shapes(1, n, &mut memo).len(), expected);
        }
    }

    #[test]
    fn refuses_long_sentences() {
        let vocab = CategoryVocab::new();
        let table = ScoreTable::zeros(9, vocab.len());
        let err = brute_force(&toks(9), &table, &vocab, &DecodeConfig::default()).unwrap_err();
        assert!(matches!(err, Error::TooLong { n: 9, cap: 8 }));
    }

    #[test]
    fn all_zero_scores() {
        let vocab = CategoryVocab::new();
        let table = ScoreTable::zeros(3, vocab.len());
        let (_, score) = brute_force(&toks(3), &table, &vocab, &DecodeConfig::default()).unwrap();
        assert_eq!(score, 0.0);
    }
}
