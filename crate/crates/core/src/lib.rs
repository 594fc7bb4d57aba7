//! Joint constituent and dependency parsing over head-annotated phrase trees.
//!
//! Constituent and dependency treebanks are fused into trees where every
//! node carries a head word. Those trees are decoded either as plain binary
//! constituent trees with head flags on their categories, or jointly with
//! an exact chart over spans and head words.

pub mod cli;
pub mod decode;
pub mod division;
pub mod error;
pub mod eval;
pub mod hpsg;
pub mod scoring;
pub mod tree;
pub mod treebank;

#[cfg(test)]
pub(crate) mod fixtures;

pub use error::{Error, Result};
