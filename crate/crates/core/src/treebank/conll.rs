//! CoNLL-X dependency treebanks.
//!
//! Columns: ID FORM LEMMA CPOSTAG POSTAG FEATS HEAD DEPREL [PHEAD PDEPREL].

use crate::error::{Error, Result};
use crate::tree::{check_heads, DependencyTree, Token};

const ABSENT: &str = "_";

fn split_columns(line: &str) -> Vec<&str> {
    let tabbed: Vec<&str> = line.split('\t').collect();
    if tabbed.len() >= 8 {
        tabbed
    } else {
        line.split_whitespace().collect()
    }
}

struct Block {
    first_line: usize,
    tokens: Vec<Token>,
    heads: Vec<usize>,
    labels: Vec<Option<String>>,
}

/// Reads blank-line separated sentences.
///
/// Non-integer IDs or heads are parse errors; multiple roots and cycles are
/// structural errors naming the sentence ordinal.
pub fn read_conll(text: &str) -> Result<Vec<DependencyTree>> {
    let mut out = Vec::new();
    let mut block: Option<Block> = None;
    let finish = |block: Block, out: &mut Vec<DependencyTree>| -> Result<()> {
        let ordinal = out.len() + 1;
        let n = block.tokens.len();
        if let Some(&bad) = block.heads.iter().find(|&&h| h > n) {
            return Err(Error::structure(
                ordinal,
                format!("head {bad} outside 0..{n} (block starting at line {})", block.first_line),
            ));
        }
        check_heads(&block.heads).map_err(|m| Error::structure(ordinal, m))?;
        out.push(
            DependencyTree::new(block.tokens, block.heads, block.labels)
                .map_err(|e| Error::structure(ordinal, e.to_string()))?,
        );
        Ok(())
    };

    for (offset, raw) in text.lines().enumerate() {
        let line_no = offset + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            if let Some(done) = block.take() {
                finish(done, &mut out)?;
            }
            continue;
        }
        let cols = split_columns(line);
        if cols.len() < 8 {
            return Err(Error::parse(
                line_no,
                format!("expected at least 8 columns, found {}", cols.len()),
            ));
        }
        let id: usize = cols[0]
            .parse()
            .map_err(|_| Error::parse(line_no, format!("non-integer ID '{}'", cols[0])))?;
        let head: usize = cols[6]
            .parse()
            .map_err(|_| Error::parse(line_no, format!("non-integer HEAD '{}'", cols[6])))?;
        let current = block.get_or_insert_with(|| Block {
            first_line: line_no,
            tokens: Vec::new(),
            heads: Vec::new(),
            labels: Vec::new(),
        });
        if id != current.tokens.len() + 1 {
            return Err(Error::parse(
                line_no,
                format!("ID {id} where {} was expected", current.tokens.len() + 1),
            ));
        }
        let pos = if cols[4] != ABSENT { cols[4] } else { cols[3] };
        current.tokens.push(Token::new(id, cols[1], pos));
        current.heads.push(head);
        current
            .labels
            .push((cols[7] != ABSENT).then(|| cols[7].to_string()));
    }
    if let Some(done) = block.take() {
        finish(done, &mut out)?;
    }
    Ok(out)
}

/// Writes ten-column CoNLL-X with a blank line after every sentence.
pub fn write_conll<'a>(trees: impl IntoIterator<Item = &'a DependencyTree>) -> String {
    let mut out = String::new();
    for tree in trees {
        for (offset, token) in tree.tokens.iter().enumerate() {
            let label = tree.labels[offset].as_deref().unwrap_or(ABSENT);
            out.push_str(&format!(
                "{}\t{}\t{ABSENT}\t{}\t{}\t{ABSENT}\t{}\t{}\t{ABSENT}\t{ABSENT}\n",
                token.index, token.form, token.pos, token.pos, tree.heads[offset], label
            ));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_token_block() {
        let trees = read_conll("1\ta\t_\tX\tX\t_\t0\troot\n").unwrap();
        assert_eq!(trees.len(), 1);
        assert_eq!(trees[0].heads, vec![0]);
        assert_eq!(trees[0].labels, vec![Some("root".to_string())]);
    }

    #[test]
    fn space_separated_fallback() {
        let trees = read_conll("1 a _ X X _ 0 root\n").unwrap();
        assert_eq!(trees[0].tokens[0].form, "a");
    }

    #[test]
    fn cycle_names_sentence() {
        let text = "1\ta\t_\tX\tX\t_\t0\troot\n\n\
                    1\ta\t_\tX\tX\t_\t0\troot\n2\tb\t_\tX\tX\t_\t3\tdep\n3\tc\t_\tX\tX\t_\t2\tdep\n4\td\t_\tX\tX\t_\t1\tdep\n5\te\t_\tX\tX\t_\t1\tdep\n";
        let err = read_conll(text).unwrap_err();
        assert!(matches!(err, Error::Structure { sentence: 2, .. }), "{err}");
    }

    #[test]
    fn non_integer_head() {
        let err = read_conll("1\ta\t_\tX\tX\t_\troot\troot\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn write_then_read() {
        let text = "1\tthe\t_\tDT\tDT\t_\t2\tdet\n2\tdog\t_\tNN\tNN\t_\t0\troot\n\n";
        let trees = read_conll(text).unwrap();
        let again = read_conll(&write_conll(&trees)).unwrap();
        assert_eq!(trees, again);
    }
}
