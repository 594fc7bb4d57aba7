//! Minimal s-expression reader shared by the bracketed formats.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Sexp {
    Atom(String),
    List { items: Vec<Sexp>, line: usize },
}

/// Reads every top-level s-expression in `text`.
///
/// Atoms outside any list are rejected; unbalanced parentheses report the
/// line of the offending bracket.
pub(crate) fn read_all(text: &str) -> Result<Vec<Sexp>> {
    let mut stack: Vec<(Vec<Sexp>, usize)> = Vec::new();
    let mut out = Vec::new();
    let mut line = 1;
    let mut chars = text.char_indices().peekable();
    while let Some((offset, ch)) = chars.next() {
        match ch {
            '\n' => line += 1,
            c if c.is_whitespace() => {}
            '(' => stack.push((Vec::new(), line)),
            ')' => {
                let (items, opened) = stack
                    .pop()
                    .ok_or_else(|| Error::parse(line, "unbalanced ')'"))?;
                let list = Sexp::List {
                    items,
                    line: opened,
                };
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(list),
                    None => out.push(list),
                }
            }
            _ => {
                let mut end = offset + ch.len_utf8();
                while let Some(&(next_offset, next)) = chars.peek() {
                    if next.is_whitespace() || next == '(' || next == ')' {
                        break;
                    }
                    end = next_offset + next.len_utf8();
                    chars.next();
                }
                let atom = Sexp::Atom(text[offset..end].to_string());
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(atom),
                    None => {
                        return Err(Error::parse(
                            line,
                            format!("text outside brackets: {}", &text[offset..end]),
                        ))
                    }
                }
            }
        }
    }
    if let Some((_, opened)) = stack.last() {
        return Err(Error::parse(*opened, "unbalanced '(' never closed"));
    }
    Ok(out)
}
