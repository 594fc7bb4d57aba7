//! Text score files.
//!
//! ```text
//! #sent 1 3
//! SPAN 1 3 NP 1.0
//! ARC 1 2 0.5
//! ROOT 2 1.0
//! ```
//!
//! Entries that are absent read as 0.

use std::fmt::Write as _;

use super::{CategoryVocab, ScoreTable};
use crate::error::{Error, Result};

/// Writes the non-zero entries of each table. Scores keep 17 significant
/// digits so that reading them back is exact.
pub fn write_scores<'a>(
    tables: impl IntoIterator<Item = (usize, &'a ScoreTable)>,
    vocab: &CategoryVocab,
) -> String {
    let mut out = String::new();
    for (ordinal, table) in tables {
        let n = table.len();
        let _ = writeln!(out, "#sent {ordinal} {n}");
        for i in 1..=n {
            for j in i..=n {
                for (label, &score) in table.span_row(i, j).iter().enumerate().take(vocab.len()) {
                    if score != 0.0 {
                        let _ = writeln!(out, "SPAN {i} {j} {} {score:.16e}", vocab.name(label));
                    }
                }
            }
        }
        for child in 1..=n {
            for head in 1..=n {
                if child != head && table.arc(child, head) != 0.0 {
                    let _ = writeln!(out, "ARC {child} {head} {:.16e}", table.arc(child, head));
                }
            }
        }
        for head in 1..=n {
            if table.root(head) != 0.0 {
                let _ = writeln!(out, "ROOT {head} {:.16e}", table.root(head));
            }
        }
        out.push('\n');
    }
    out
}

enum EntryKind {
    Span(usize, usize, usize, f64),
    Arc(usize, usize, f64),
    Root(usize, f64),
}

fn index(field: Option<&str>, n: usize, line: usize, what: &str) -> Result<usize> {
    let field = field.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    let value: usize = field
        .parse()
        .map_err(|_| Error::parse(line, format!("{what} '{field}' is not an integer")))?;
    if value == 0 || value > n {
        return Err(Error::parse(line, format!("{what} {value} outside 1..{n}")));
    }
    Ok(value)
}

fn score(field: Option<&str>, line: usize) -> Result<f64> {
    let field = field.ok_or_else(|| Error::parse(line, "missing score"))?;
    let value: f64 = field
        .parse()
        .map_err(|_| Error::parse(line, format!("score '{field}' is not a number")))?;
    if !value.is_finite() {
        return Err(Error::parse(line, format!("score '{field}' is not finite")));
    }
    Ok(value)
}

/// Reads score blocks, interning unseen categories into `vocab`.
///
/// Returns `(ordinal, table)` pairs in file order; every table is as wide
/// as the final vocabulary.
pub fn read_scores(text: &str, vocab: &mut CategoryVocab) -> Result<Vec<(usize, ScoreTable)>> {
    let mut blocks: Vec<(usize, usize, Vec<EntryKind>)> = Vec::new();
    for (offset, raw) in text.lines().enumerate() {
        let line = offset + 1;
        let mut fields = raw.split_whitespace();
        let Some(tag) = fields.next() else { continue };
        if tag == "#sent" {
            let ordinal = fields
                .next()
                .and_then(|f| f.parse().ok())
                .ok_or_else(|| Error::parse(line, "bad sentence ordinal"))?;
            let n: usize = fields
                .next()
                .and_then(|f| f.parse().ok())
                .ok_or_else(|| Error::parse(line, "bad sentence length"))?;
            if n == 0 {
                return Err(Error::parse(line, "sentence length 0"));
            }
            blocks.push((ordinal, n, Vec::new()));
            continue;
        }
        let Some((_, n, entries)) = blocks.last_mut() else {
            return Err(Error::parse(line, "entry before the first #sent header"));
        };
        let n = *n;
        let kind = match tag {
            "SPAN" => {
                let i = index(fields.next(), n, line, "span start")?;
                let j = index(fields.next(), n, line, "span end")?;
                if j < i {
                    return Err(Error::parse(line, format!("span ({i},{j}) ends before it starts")));
                }
                let category = fields.next().ok_or_else(|| Error::parse(line, "missing category"))?;
                let label = vocab.intern(category);
                EntryKind::Span(i, j, label, score(fields.next(), line)?)
            }
            "ARC" => {
                let child = index(fields.next(), n, line, "child")?;
                let head = index(fields.next(), n, line, "head")?;
                if child == head {
                    return Err(Error::parse(line, format!("self-arc on token {child}")));
                }
                EntryKind::Arc(child, head, score(fields.next(), line)?)
            }
            "ROOT" => {
                let head = index(fields.next(), n, line, "head")?;
                EntryKind::Root(head, score(fields.next(), line)?)
            }
            other => return Err(Error::parse(line, format!("unknown entry '{other}'"))),
        };
        if fields.next().is_some() {
            return Err(Error::parse(line, "trailing fields"));
        }
        entries.push(kind);
    }
    let labels = vocab.len();
    Ok(blocks
        .into_iter()
        .map(|(ordinal, n, entries)| {
            let mut table = ScoreTable::zeros(n, labels);
            for entry in entries {
                match entry {
                    EntryKind::Span(i, j, l, s) => table.set_span(i, j, l, s),
                    EntryKind::Arc(c, h, s) => table.set_arc(c, h, s),
                    EntryKind::Root(h, s) => table.set_root(h, s),
                }
            }
            (ordinal, table)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_entries() {
        let mut vocab = CategoryVocab::new();
        let text = "#sent 1 9\nSPAN 1 3 NP 1.0\nROOT 4 1.0\nARC 3 4 0.5\n";
        let tables = read_scores(text, &mut vocab).unwrap();
        let (ordinal, table) = &tables[0];
        assert_eq!(*ordinal, 1);
        assert_eq!(table.span(1, 3, vocab.id("NP").unwrap()), 1.0);
        assert_eq!(table.root(4), 1.0);
        assert_eq!(table.arc(3, 4), 0.5);
        assert_eq!(table.arc(4, 3), 0.0);
    }

    #[test]
    fn index_out_of_range_names_line() {
        let mut vocab = CategoryVocab::new();
        let err = read_scores("#sent 1 3\nSPAN 1 2 NP 1\nARC 4 1 1\n", &mut vocab).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn round_trip_is_exact() {
        let mut vocab = CategoryVocab::new();
        vocab.intern("NP");
        let mut table = ScoreTable::zeros(3, vocab.len());
        table.set_span(1, 2, 2, 0.1 + 0.2);
        table.set_span(3, 3, 0, -1.0 / 3.0);
        table.set_arc(1, 3, 1e-300);
        table.set_root(3, -7.25);
        let text = write_scores([(1, &table)], &vocab);
        let mut again = CategoryVocab::new();
        let back = read_scores(&text, &mut again).unwrap();
        assert_eq!(back[0].1, table);
    }
}
