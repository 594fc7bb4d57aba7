//! Readers and writers for constituent, dependency and head-annotated treebanks.

mod bracketed;
mod conll;
mod hpsg_format;
mod sexp;

pub use bracketed::{
    read_bracketed, strip_function_tags, write_bracketed, write_tree, BracketedRead, SkipRecord,
    NONE_TAG,
};
pub use conll::{read_conll, write_conll};
pub use hpsg_format::{read_hpsg, write_hpsg, write_hpsg_tree};

use crate::error::{Error, Result};
use crate::tree::{ConstituentTree, DependencyTree};

/// Pairs two treebanks sentence by sentence.
///
/// Fails on the first sentence whose token count or forms differ; a count
/// mismatch between the treebanks is also an error.
pub fn pair_treebanks(
    constituents: Vec<ConstituentTree>,
    dependencies: Vec<DependencyTree>,
) -> Result<Vec<(ConstituentTree, DependencyTree)>> {
    for (offset, (c, d)) in constituents.iter().zip(&dependencies).enumerate() {
        let sentence = offset + 1;
        if let Some(pos) = c.tokens.iter().zip(&d.tokens).position(|(a, b)| a.form != b.form) {
            return Err(Error::Alignment {
                sentence,
                token: Some(pos + 1),
                message: format!(
                    "'{}' vs '{}'",
                    c.tokens[pos].form, d.tokens[pos].form
                ),
            });
        }
        if c.len() != d.len() {
            return Err(Error::Alignment {
                sentence,
                token: Some(c.len().min(d.len()) + 1),
                message: format!("{} vs {} tokens", c.len(), d.len()),
            });
        }
    }
    if constituents.len() != dependencies.len() {
        return Err(Error::Alignment {
            sentence: constituents.len().min(dependencies.len()) + 1,
            token: None,
            message: format!(
                "{} constituent trees vs {} dependency trees",
                constituents.len(),
                dependencies.len()
            ),
        });
    }
    Ok(constituents.into_iter().zip(dependencies).collect())
}
