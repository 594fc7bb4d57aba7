//! First-order projective dependency decoding with a single root, O(n³).

use super::check_input;
use crate::error::Result;
use crate::scoring::ScoreTable;
use crate::tree::{DependencyTree, Token};

const LEFT: usize = 0;
const RIGHT: usize = 1;

struct Chart {
    n: usize,
    complete: Vec<[f64; 2]>,
    incomplete: Vec<[f64; 2]>,
    complete_back: Vec<[usize; 2]>,
    incomplete_back: Vec<[usize; 2]>,
}

impl Chart {
    fn at(&self, s: usize, t: usize) -> usize {
        (s - 1) * self.n + (t - 1)
    }
}

/// Maximum spanning projective tree under arc and root scores.
///
/// `LEFT` items are headed at their right end, `RIGHT` items at their left
/// end. Returns the tree and its score.
pub fn decode_eisner(tokens: &[Token], table: &ScoreTable) -> Result<(DependencyTree, f64)> {
    check_input(tokens, table)?;
    let n = table.len();
    let mut c = Chart {
        n,
        complete: vec![[f64::NEG_INFINITY; 2]; n * n],
        incomplete: vec![[f64::NEG_INFINITY; 2]; n * n],
        complete_back: vec![[0; 2]; n * n],
        incomplete_back: vec![[0; 2]; n * n],
    };
    for s in 1..=n {
        let at = c.at(s, s);
        c.complete[at] = [0.0, 0.0];
    }
    for len in 1..n {
        for s in 1..=n - len {
            let t = s + len;
            let at = c.at(s, t);

            let mut best = (f64::NEG_INFINITY, s);
            for q in s..t {
                let v = c.complete[c.at(s, q)][RIGHT] + c.complete[c.at(q + 1, t)][LEFT];
                if v > best.0 {
                    best = (v, q);
                }
            }
            c.incomplete[at] = [best.0 + table.arc(s, t), best.0 + table.arc(t, s)];
            c.incomplete_back[at] = [best.1, best.1];

            let mut left = (f64::NEG_INFINITY, s);
            for q in s..t {
                let v = c.complete[c.at(s, q)][LEFT] + c.incomplete[c.at(q, t)][LEFT];
                if v > left.0 {
                    left = (v, q);
                }
            }
            let mut right = (f64::NEG_INFINITY, t);
            for q in s + 1..=t {
                let v = c.incomplete[c.at(s, q)][RIGHT] + c.complete[c.at(q, t)][RIGHT];
                if v > right.0 {
                    right = (v, q);
                }
            }
            c.complete[at] = [left.0, right.0];
            c.complete_back[at] = [left.1, right.1];
        }
    }

    let mut best = (f64::NEG_INFINITY, 1);
    for h in 1..=n {
        let v = c.complete[c.at(1, h)][LEFT] + c.complete[c.at(h, n)][RIGHT] + table.root(h);
        if v > best.0 {
            best = (v, h);
        }
    }
    let mut heads = vec![0; n];
    let root = best.1;
    let mut stack = vec![(1, root, LEFT, true), (root, n, RIGHT, true)];
    while let Some((s, t, dir, complete)) = stack.pop() {
        if s == t {
            continue;
        }
        let at = c.at(s, t);
        if complete {
            let q = c.complete_back[at][dir];
            if dir == LEFT {
                stack.push((s, q, LEFT, true));
                stack.push((q, t, LEFT, false));
            } else {
                stack.push((s, q, RIGHT, false));
                stack.push((q, t, RIGHT, true));
            }
        } else {
            let q = c.incomplete_back[at][dir];
            if dir == LEFT {
                heads[s - 1] = t;
            } else {
                heads[t - 1] = s;
            }
            stack.push((s, q, RIGHT, true));
            stack.push((q + 1, t, LEFT, true));
        }
    }
    let tree = DependencyTree::unlabeled(tokens.to_vec(), heads)?;
    Ok((tree, best.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(n: usize) -> Vec<Token> {
        (1..=n).map(|i| Token::new(i, format!("w{i}"), "P")).collect()
    }

    #[test]
    fn two_tokens_pick_the_better_tree() {
        let mut t = ScoreTable::zeros(2, 1);
        t.set_arc(1, 2, 0.3);
        t.set_root(2, 0.1);
        t.set_arc(2, 1, 0.2);
        t.set_root(1, 0.1);
        let (tree, score) = decode_eisner(&toks(2), &t).unwrap();
        assert_eq!(tree.heads, vec![2, 0]);
        assert!((score - 0.4).abs() < 1e-12);
    }

    #[test]
    fn oracle_arcs_are_recovered() {
        let heads = [3, 3, 4, 0, 4, 5, 8, 5, 4];
        let mut t = ScoreTable::zeros(9, 1);
        for (offset, &h) in heads.iter().enumerate() {
            if h == 0 {
                t.set_root(offset + 1, 1.0);
            } else {
                t.set_arc(offset + 1, h, 1.0);
            }
        }
        let (tree, score) = decode_eisner(&toks(9), &t).unwrap();
        assert_eq!(tree.heads, heads);
        assert_eq!(score, 9.0);
    }
}
