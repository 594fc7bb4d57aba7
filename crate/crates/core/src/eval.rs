//! Bracketing precision/recall/F1 in the evalb convention and attachment
//! scores without punctuation.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::hpsg::SPLIT_CATEGORY;
use crate::scoring::is_empty_name;
use crate::tree::{ConstituentNode, ConstituentTree, DependencyTree, Token};

/// POS tags treated as punctuation by default.
pub const DEFAULT_PUNCT: [&str; 5] = ["``", "''", ":", ",", "."];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalConfig {
    /// Gold POS tags whose tokens are deleted before bracket matching and
    /// excluded from attachment scores.
    pub punct: BTreeSet<String>,
    /// Category rewrites applied to both sides before matching.
    pub equivalences: HashMap<String, String>,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            punct: DEFAULT_PUNCT.iter().map(|s| s.to_string()).collect(),
            equivalences: HashMap::new(),
        }
    }
}

impl EvalConfig {
    /// Parses a comma- or space-separated tag list. A lone `,` names the
    /// comma tag itself.
    pub fn with_punct(list: &str) -> Self {
        let punct = list
            .split_whitespace()
            .flat_map(|chunk| {
                if chunk.chars().all(|c| c == ',') {
                    vec![chunk.to_string()]
                } else {
                    chunk.split(',').filter(|s| !s.is_empty()).map(str::to_string).collect()
                }
            })
            .collect();
        EvalConfig {
            punct,
            ..Default::default()
        }
    }

    fn is_punct(&self, token: &Token) -> bool {
        self.punct.contains(&token.pos)
    }
}

fn percent(num: usize, den: usize) -> f64 {
    if den == 0 {
        100.0
    } else {
        100.0 * num as f64 / den as f64
    }
}

fn harmonic(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BracketScores {
    pub gold: usize,
    pub predicted: usize,
    pub matched: usize,
    pub recall: f64,
    pub precision: f64,
    pub f1: f64,
    pub sentences: usize,
    pub exact: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AttachmentScores {
    /// Non-punctuation tokens.
    pub tokens: usize,
    pub correct_heads: usize,
    /// Present only when both sides carry labels.
    pub correct_labels: Option<usize>,
    pub uas: f64,
    pub las: Option<f64>,
    pub sentences: usize,
    pub exact: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct EvalReport {
    pub brackets: Option<BracketScores>,
    pub attachment: Option<AttachmentScores>,
}

fn check_aligned(sentence: usize, gold: &[Token], pred: &[Token]) -> Result<()> {
    if let Some(pos) = gold.iter().zip(pred).position(|(g, p)| g.form != p.form) {
        return Err(Error::Alignment {
            sentence,
            token: Some(pos + 1),
            message: format!("'{}' vs '{}'", gold[pos].form, pred[pos].form),
        });
    }
    if gold.len() != pred.len() {
        return Err(Error::Alignment {
            sentence,
            token: None,
            message: format!("{} vs {} tokens", gold.len(), pred.len()),
        });
    }
    Ok(())
}

fn check_counts(gold: usize, pred: usize) -> Result<()> {
    if gold != pred {
        return Err(Error::Alignment {
            sentence: gold.min(pred) + 1,
            token: None,
            message: format!("{gold} gold vs {pred} predicted sentences"),
        });
    }
    Ok(())
}

/// Labeled brackets `(start, end, category)` over re-indexed positions.
fn brackets(tree: &ConstituentTree, keep: &[Option<usize>], cfg: &EvalConfig) -> HashMap<(usize, usize, String), usize> {
    let mut out = HashMap::new();
    for node in tree.root.internal_nodes() {
        if node.is_preterminal() {
            continue;
        }
        let ConstituentNode::Internal { category, span, .. } = node else {
            continue;
        };
        if category == SPLIT_CATEGORY || is_empty_name(category) || category == "∅" {
            continue;
        }
        let mut kept = span.tokens().filter_map(|i| keep[i - 1]);
        let Some(first) = kept.next() else { continue };
        let last = kept.next_back().unwrap_or(first);
        let label = cfg.equivalences.get(category).unwrap_or(category).clone();
        *out.entry((first, last, label)).or_insert(0) += 1;
    }
    out
}

/// evalb-style labeled bracketing scores over aligned tree pairs.
///
/// Punctuation tokens (by gold POS) are deleted and positions re-indexed;
/// preterminals, `#` and empty-category nodes never count as brackets.
pub fn bracket_f1(gold: &[ConstituentTree], pred: &[ConstituentTree], cfg: &EvalConfig) -> Result<BracketScores> {
    check_counts(gold.len(), pred.len())?;
    let (mut g_total, mut p_total, mut matched, mut exact) = (0, 0, 0, 0);
    for (offset, (g, p)) in gold.iter().zip(pred).enumerate() {
        check_aligned(offset + 1, &g.tokens, &p.tokens)?;
        let mut next = 0;
        let keep: Vec<Option<usize>> = g
            .tokens
            .iter()
            .map(|t| {
                (!cfg.is_punct(t)).then(|| {
                    next += 1;
                    next
                })
            })
            .collect();
        let gb = brackets(g, &keep, cfg);
        let pb = brackets(p, &keep, cfg);
        let gn: usize = gb.values().sum();
        let pn: usize = pb.values().sum();
        let m: usize = gb
            .iter()
            .map(|(k, c)| (*c).min(pb.get(k).copied().unwrap_or(0)))
            .sum();
        if m == gn && m == pn {
            exact += 1;
        }
        g_total += gn;
        p_total += pn;
        matched += m;
    }
    let recall = percent(matched, g_total);
    let precision = percent(matched, p_total);
    Ok(BracketScores {
        gold: g_total,
        predicted: p_total,
        matched,
        recall,
        precision,
        f1: harmonic(precision, recall),
        sentences: gold.len(),
        exact,
    })
}

/// Unlabeled and labeled attachment scores, skipping punctuation tokens
/// (by gold POS). LAS is reported only when both sides carry labels.
pub fn attachment_scores(gold: &[DependencyTree], pred: &[DependencyTree], cfg: &EvalConfig) -> Result<AttachmentScores> {
    check_counts(gold.len(), pred.len())?;
    let labeled = gold.iter().all(DependencyTree::has_labels) && pred.iter().all(DependencyTree::has_labels);
    let (mut tokens, mut heads, mut labels, mut exact) = (0, 0, 0, 0);
    for (offset, (g, p)) in gold.iter().zip(pred).enumerate() {
        check_aligned(offset + 1, &g.tokens, &p.tokens)?;
        let mut all_right = true;
        for (i, token) in g.tokens.iter().enumerate() {
            if cfg.is_punct(token) {
                continue;
            }
            tokens += 1;
            if g.heads[i] == p.heads[i] {
                heads += 1;
                if labeled && g.labels[i] == p.labels[i] {
                    labels += 1;
                }
            } else {
                all_right = false;
            }
        }
        if all_right {
            exact += 1;
        }
    }
    Ok(AttachmentScores {
        tokens,
        correct_heads: heads,
        correct_labels: labeled.then_some(labels),
        uas: percent(heads, tokens),
        las: labeled.then(|| percent(labels, tokens)),
        sentences: gold.len(),
        exact,
    })
}

/// Aligned-column summary followed by a `key=value` block.
pub fn format_report(report: &EvalReport) -> String {
    let mut table = String::new();
    let mut keys = String::new();
    if let Some(b) = &report.brackets {
        let _ = writeln!(table, "{:<22}{:>10}", "Sentences", b.sentences);
        let _ = writeln!(table, "{:<22}{:>10}", "Gold brackets", b.gold);
        let _ = writeln!(table, "{:<22}{:>10}", "Test brackets", b.predicted);
        let _ = writeln!(table, "{:<22}{:>10}", "Matched brackets", b.matched);
        let _ = writeln!(table, "{:<22}{:>10.2}", "Bracketing recall", b.recall);
        let _ = writeln!(table, "{:<22}{:>10.2}", "Bracketing precision", b.precision);
        let _ = writeln!(table, "{:<22}{:>10.2}", "Bracketing F1", b.f1);
        let _ = writeln!(table, "{:<22}{:>10}", "Exact match", b.exact);
        let _ = writeln!(keys, "lr={:.2}\nlp={:.2}\nf1={:.2}\nbracket_sentences={}\nbracket_exact={}", b.recall, b.precision, b.f1, b.sentences, b.exact);
    }
    if let Some(a) = &report.attachment {
        let _ = writeln!(table, "{:<22}{:>10}", "Scored tokens", a.tokens);
        let _ = writeln!(table, "{:<22}{:>10.2}", "UAS", a.uas);
        if let Some(las) = a.las {
            let _ = writeln!(table, "{:<22}{:>10.2}", "LAS", las);
        }
        let _ = writeln!(table, "{:<22}{:>10}", "Exact attachment", a.exact);
        let _ = writeln!(keys, "uas={:.2}", a.uas);
        if let Some(las) = a.las {
            let _ = writeln!(keys, "las={las:.2}");
        }
        let _ = writeln!(keys, "dep_sentences={}\ndep_exact={}", a.sentences, a.exact);
    }
    format!("{table}\n{keys}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treebank::read_bracketed;

    fn trees(text: &str) -> Vec<ConstituentTree> {
        read_bracketed(text).unwrap().trees
    }

    #[test]
    fn identity_is_perfect() {
        let g = trees("(S (NP (DT a) (NN b)) (VP (VB c)) (. .))");
        let s = bracket_f1(&g, &g, &EvalConfig::default()).unwrap();
        assert_eq!((s.recall, s.precision, s.f1), (100.0, 100.0, 100.0));
        assert_eq!(s.exact, 1);
    }

    #[test]
    fn punctuation_is_deleted() {
        // Only the final period differs in attachment; the spans that
        // differ only by punctuation collapse onto each other.
        let g = trees("(S (NP (A a) (B b)) (. .))");
        let p = trees("(S (NP (A a) (B b) (. .)))");
        let s = bracket_f1(&g, &p, &EvalConfig::default()).unwrap();
        assert_eq!(s.f1, 100.0);
    }

    #[test]
    fn split_nodes_are_ignored() {
        let g = trees("(S (A a) (B b) (C c))");
        let p = trees("(S (# (A a) (B b)) (C c))");
        assert_eq!(bracket_f1(&g, &p, &EvalConfig::default()).unwrap().f1, 100.0);
    }

    fn deps(heads: &[usize], labels: &[&str], pos: &[&str]) -> DependencyTree {
        let tokens = pos
            .iter()
            .enumerate()
            .map(|(i, p)| Token::new(i + 1, format!("w{}", i + 1), *p))
            .collect();
        let labels = labels.iter().map(|l| Some(l.to_string())).collect();
        DependencyTree::new(tokens, heads.to_vec(), labels).unwrap()
    }

    #[test]
    fn nine_heads_and_eight_labels_of_ten() {
        let pos = ["NN"; 10];
        let heads = [2, 0, 2, 3, 4, 5, 6, 7, 8, 9];
        let labels = ["a"; 10];
        let gold = deps(&heads, &labels, &pos);
        // Token 10 gets the wrong head, token 9 the wrong label.
        let mut pred_heads = heads;
        pred_heads[9] = 8;
        let mut pred_labels = labels;
        pred_labels[8] = "b";
        let pred = deps(&pred_heads, &pred_labels, &pos);
        let s = attachment_scores(&[gold], &[pred], &EvalConfig::default()).unwrap();
        assert_eq!((s.tokens, s.correct_heads, s.correct_labels), (10, 9, Some(8)));
        assert_eq!(format!("{:.2} {:.2}", s.uas, s.las.unwrap()), "90.00 80.00");
    }

    #[test]
    fn all_punctuation_sentence_adds_nothing() {
        let gold = deps(&[0, 1], &["root", "p"], &[".", ","]);
        let both = [gold];
        let s = attachment_scores(&both, &both, &EvalConfig::default()).unwrap();
        assert_eq!(s.tokens, 0);
        assert_eq!(s.uas, 100.0);
    }

    #[test]
    fn punct_list_parsing() {
        let cfg = EvalConfig::with_punct("`` '' : , .");
        assert_eq!(cfg.punct.len(), 5);
        let cfg = EvalConfig::with_punct("PU,.");
        assert!(cfg.punct.contains("PU") && cfg.punct.contains("."));
    }
}
