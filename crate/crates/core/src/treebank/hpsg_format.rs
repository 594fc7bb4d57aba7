//! Head-annotated bracketed trees: `(NP[3] (NNP[1] Federal) (NNP[2] Paper) (NNP[3] Board))`.

use std::fmt::Write as _;

use super::sexp::{read_all, Sexp};
use crate::error::{Error, Result};
use crate::hpsg::{HpsgNode, HpsgTree};
use crate::tree::Token;

fn split_head(atom: &str, line: usize) -> Result<(String, usize)> {
    let open = atom
        .rfind('[')
        .filter(|_| atom.ends_with(']'))
        .ok_or_else(|| Error::parse(line, format!("category '{atom}' lacks a [head] suffix")))?;
    let head = atom[open + 1..atom.len() - 1]
        .parse()
        .map_err(|_| Error::parse(line, format!("bad head index in '{atom}'")))?;
    if open == 0 {
        return Err(Error::parse(line, format!("empty category in '{atom}'")));
    }
    Ok((atom[..open].to_string(), head))
}

fn build(sexp: &Sexp, tokens: &mut Vec<Token>, sentence: usize) -> Result<HpsgNode> {
    let (items, line) = match sexp {
        Sexp::Atom(word) => return Err(Error::parse(0, format!("bare word '{word}'"))),
        Sexp::List { items, line } => (items, *line),
    };
    let (category, head) = match items.first() {
        Some(Sexp::Atom(atom)) => split_head(atom, line)?,
        _ => return Err(Error::parse(line, "node without a category")),
    };
    match &items[1..] {
        [] => Err(Error::parse(line, format!("node '{category}' has no children"))),
        [Sexp::Atom(form)] => {
            let index = tokens.len() + 1;
            tokens.push(Token::new(index, form.clone(), category.clone()));
            if head != index {
                return Err(Error::structure(
                    sentence,
                    format!("preterminal {category} over token {index} claims head {head}"),
                ));
            }
            Ok(HpsgNode::preterminal(category, index))
        }
        rest => {
            let children = rest
                .iter()
                .map(|c| match c {
                    Sexp::Atom(word) => Err(Error::parse(
                        line,
                        format!("word '{word}' next to phrases under '{category}'"),
                    )),
                    list => build(list, tokens, sentence),
                })
                .collect::<Result<Vec<_>>>()?;
            let node = HpsgNode::phrase(category, head, children);
            if !node.span.contains(head) {
                return Err(Error::structure(
                    sentence,
                    format!("head {head} outside span {} of {}", node.span, node.category),
                ));
            }
            Ok(node)
        }
    }
}

/// Reads head-annotated trees, one s-expression per sentence.
pub fn read_hpsg(text: &str) -> Result<Vec<HpsgTree>> {
    read_all(text)?
        .iter()
        .enumerate()
        .map(|(offset, sexp)| {
            let sentence = offset + 1;
            let mut tokens = Vec::new();
            let root = build(sexp, &mut tokens, sentence)?;
            HpsgTree::new(tokens, root).map_err(|e| Error::structure(sentence, e.to_string()))
        })
        .collect()
}

fn write_node(node: &HpsgNode, tokens: &[Token], out: &mut String) {
    let _ = write!(out, "({}[{}]", node.category, node.head);
    if node.is_preterminal() {
        out.push(' ');
        out.push_str(&tokens[node.span.start - 1].form);
    }
    for child in &node.children {
        out.push(' ');
        write_node(child, tokens, out);
    }
    out.push(')');
}

pub fn write_hpsg_tree(tree: &HpsgTree) -> String {
    let mut out = String::new();
    write_node(&tree.root, &tree.tokens, &mut out);
    out
}

/// Writes one tree per line. Dependency labels are not part of the format.
pub fn write_hpsg<'a>(trees: impl IntoIterator<Item = &'a HpsgTree>) -> String {
    let mut out = String::new();
    for tree in trees {
        out.push_str(&write_hpsg_tree(tree));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_token() {
        let tree = HpsgTree::new(
            vec![Token::new(1, "w", "P")],
            HpsgNode::phrase("X", 1, vec![HpsgNode::preterminal("P", 1)]),
        )
        .unwrap();
        assert_eq!(write_hpsg_tree(&tree), "(X[1] (P[1] w))");
        assert_eq!(read_hpsg("(X[1] (P[1] w))").unwrap()[0], tree);
    }

    #[test]
    fn phrase_head_annotation() {
        let text = "(NP[3] (NNP[1] Federal) (NNP[2] Paper) (NNP[3] Board))";
        let trees = read_hpsg(text).unwrap();
        assert_eq!(trees[0].root.head, 3);
        assert_eq!(write_hpsg_tree(&trees[0]), text);
    }

    #[test]
    fn head_outside_span_is_rejected() {
        let text = "(S[2] (NP[2] (DT[1] the)) (VP[2] (VBZ[2] barks)))";
        let err = read_hpsg(text).unwrap_err();
        assert!(matches!(err, Error::Structure { sentence: 1, .. }), "{err}");
    }

    #[test]
    fn missing_head_suffix() {
        assert!(matches!(read_hpsg("(X (P[1] w))"), Err(Error::Parse { .. })));
    }
}
