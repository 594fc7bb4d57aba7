//! Penn Treebank style bracketed trees.

use std::fmt::Write as _;

use super::sexp::{read_all, Sexp};
use crate::error::{Error, Result};
use crate::tree::{ConstituentNode, ConstituentTree, Token};

pub const NONE_TAG: &str = "-NONE-";

/// A tree that was dropped while reading, e.g. because it only contained
/// empty elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkipRecord {
    /// 1-based position of the tree in the input.
    pub tree: usize,
    pub line: usize,
    pub reason: String,
}

#[derive(Clone, Debug, Default)]
pub struct BracketedRead {
    pub trees: Vec<ConstituentTree>,
    pub skipped: Vec<SkipRecord>,
}

/// Removes function tags and coindexation from a nonterminal category:
/// `NP-SBJ-1` becomes `NP`, `S=2` becomes `S`.
pub fn strip_function_tags(category: &str) -> &str {
    if matches!(category, NONE_TAG | "#" | "∅") {
        return category;
    }
    match category.find(['-', '=']) {
        Some(0) | None => category,
        Some(cut) => &category[..cut],
    }
}

enum Raw {
    Word(String),
    Node { label: String, children: Vec<Raw> },
}

fn to_raw(sexp: &Sexp) -> Result<Raw> {
    let (items, line) = match sexp {
        Sexp::Atom(word) => return Ok(Raw::Word(word.clone())),
        Sexp::List { items, line } => (items, *line),
    };
    let (label, rest) = match items.first() {
        Some(Sexp::Atom(label)) => (label.clone(), &items[1..]),
        Some(Sexp::List { .. }) => (String::new(), &items[..]),
        None => return Err(Error::parse(line, "empty brackets")),
    };
    if rest.is_empty() {
        return Err(Error::parse(line, format!("node '{label}' has no children")));
    }
    if let [Sexp::Atom(word)] = rest {
        return Ok(Raw::Node {
            label,
            children: vec![Raw::Word(word.clone())],
        });
    }
    let mut children = Vec::with_capacity(rest.len());
    for item in rest {
        match item {
            Sexp::Atom(word) => {
                return Err(Error::parse(
                    line,
                    format!("word '{word}' next to phrases under '{label}'"),
                ))
            }
            list => children.push(to_raw(list)?),
        }
    }
    Ok(Raw::Node { label, children })
}

fn is_preterminal(children: &[Raw]) -> bool {
    matches!(children, [Raw::Word(_)])
}

fn strip_empty(raw: Raw) -> Option<Raw> {
    match raw {
        Raw::Word(w) => Some(Raw::Word(w)),
        Raw::Node { label, children } => {
            if is_preterminal(&children) {
                return (label != NONE_TAG).then_some(Raw::Node { label, children });
            }
            let children: Vec<Raw> = children.into_iter().filter_map(strip_empty).collect();
            (!children.is_empty()).then_some(Raw::Node { label, children })
        }
    }
}

fn build(raw: Raw, tokens: &mut Vec<Token>, line: usize) -> Result<ConstituentNode> {
    match raw {
        Raw::Word(word) => Err(Error::parse(line, format!("bare word '{word}'"))),
        Raw::Node { label, children } => {
            if label.is_empty() {
                return Err(Error::parse(line, "unlabeled node inside a tree"));
            }
            if is_preterminal(&children) {
                let Some(Raw::Word(form)) = children.into_iter().next() else {
                    unreachable!()
                };
                let index = tokens.len() + 1;
                tokens.push(Token::new(index, form, label.clone()));
                return Ok(ConstituentNode::preterminal(label, index));
            }
            let category = strip_function_tags(&label).to_string();
            let children = children
                .into_iter()
                .map(|c| build(c, tokens, line))
                .collect::<Result<Vec<_>>>()?;
            Ok(ConstituentNode::phrase(category, children))
        }
    }
}

/// Reads zero or more bracketed trees.
///
/// Function tags are stripped from nonterminals, `-NONE-` elements are
/// removed together with any phrase left empty, and a top-level wrapper
/// with an empty label is unwrapped. Trees that become empty are skipped
/// and listed in [`BracketedRead::skipped`].
pub fn read_bracketed(text: &str) -> Result<BracketedRead> {
    let mut out = BracketedRead::default();
    for (ordinal, sexp) in read_all(text)?.iter().enumerate() {
        let line = match sexp {
            Sexp::List { line, .. } => *line,
            Sexp::Atom(_) => 0,
        };
        let mut raw = to_raw(sexp)?;
        if let Raw::Node { label, children } = &mut raw {
            if label.is_empty() {
                if children.len() != 1 {
                    return Err(Error::parse(line, "unlabeled wrapper with several children"));
                }
                raw = children.pop().unwrap();
            }
        }
        let Some(raw) = strip_empty(raw) else {
            log::warn!("tree {} (line {line}) is empty after removing {NONE_TAG}", ordinal + 1);
            out.skipped.push(SkipRecord {
                tree: ordinal + 1,
                line,
                reason: format!("empty after removing {NONE_TAG}"),
            });
            continue;
        };
        let mut tokens = Vec::new();
        let root = build(raw, &mut tokens, line)?;
        let tree = ConstituentTree::new(tokens, root).map_err(|e| Error::parse(line, e.to_string()))?;
        out.trees.push(tree);
    }
    Ok(out)
}

fn write_node(node: &ConstituentNode, tokens: &[Token], out: &mut String) {
    match node {
        ConstituentNode::Leaf(index) => out.push_str(&tokens[index - 1].form),
        ConstituentNode::Internal {
            category, children, ..
        } => {
            let _ = write!(out, "({category}");
            for child in children {
                out.push(' ');
                write_node(child, tokens, out);
            }
            out.push(')');
        }
    }
}

/// Serializes one tree on a single line.
pub fn write_tree(tree: &ConstituentTree) -> String {
    let mut out = String::new();
    write_node(&tree.root, &tree.tokens, &mut out);
    out
}

/// Serializes trees one per line.
pub fn write_bracketed<'a>(trees: impl IntoIterator<Item = &'a ConstituentTree>) -> String {
    let mut out = String::new();
    for tree in trees {
        out.push_str(&write_tree(tree));
        out.push('\n');
    }
    out
}
